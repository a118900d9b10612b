#pragma once

#include <span>
#include <string>
#include <vector>

#include "ftbfs/bfs_tree.hpp"
#include "ftbfs/replacement.hpp"

namespace ftbfs {

/// A labelled set of uncovered pairs, stored as sorted indices into a ReplacementTable.
struct PairSet {
  std::string label;
  std::vector<PairIndex> pairs;

  bool contains(PairIndex p) const;
  std::size_t size() const noexcept { return pairs.size(); }
  bool empty() const noexcept { return pairs.empty(); }
};

PairSet make_pair_set(std::string label, std::vector<PairIndex> pairs);

/// Detours of two new-ending paths with different targets share a vertex
/// internal to both. Symmetric. Throws std::invalid_argument for same-target
/// or non-new-ending inputs.
bool interferes(const ReplacementPath& p, const ReplacementPath& q);

/// The detour of p meets pi(LCA(v, t), t) minus LCA(v, t), where v and t are
/// the targets of p and q. Not symmetric.
bool pi_intersects(const BfsTree& tree, const ReplacementPath& p, const ReplacementPath& q);

/// (not ~)-interference adjacency among a universe of uncovered pairs, built by
/// bucketing pairs on the internal vertices of their detours.
class InterferenceIndex {
 public:
  InterferenceIndex(const BfsTree& tree, const ReplacementTable& table, std::span<const PairIndex> universe);

  /// Sorted partners q of p with q in the universe, distinct targets, interference and e !~ e'.
  std::span<const PairIndex> nsim_partners(PairIndex p) const;
  std::size_t relation_count() const noexcept { return relation_count_; }

 private:
  std::vector<std::vector<PairIndex>> partners_;
  std::size_t relation_count_ = 0;
};

/// I^{not ~}(pair) restricted to `universe`, by direct pairwise evaluation.
PairSet i_nsim(const BfsTree& tree, const ReplacementTable& table, PairIndex pair, const PairSet& universe);

struct TypeClassification {
  PairSet a;
  PairSet b;
  PairSet c;
};

/// Splits `set` into types A, B, C. A is computed first, B against the frozen A,
/// C is the remainder. The index must cover at least `set`.
TypeClassification classify_types(const BfsTree& tree, const ReplacementTable& table, const InterferenceIndex& index,
                                  const PairSet& set);
TypeClassification classify_types(const BfsTree& tree, const ReplacementTable& table, const PairSet& set);

/// No (not ~)-interference inside the set.
bool is_sim_set(const BfsTree& tree, const ReplacementTable& table, const PairSet& set);

}  // namespace ftbfs
