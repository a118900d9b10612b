#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftbfs/bfs_tree.hpp"
#include "ftbfs/decomposition.hpp"
#include "ftbfs/graph.hpp"
#include "ftbfs/interference.hpp"
#include "ftbfs/replacement.hpp"

namespace ftbfs {

/// ceil(1/eps) + 2. Throws std::invalid_argument unless 0 < eps <= 1.
std::uint32_t k_eps(double epsilon);

/// ceil(n^eps), snapping values within 1e-9 of an integer first.
std::uint64_t ceil_n_pow_eps(std::size_t n, double epsilon);

/// Edge membership over the edge ids of one graph.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t edge_count) : in_(edge_count, 0) {}

  /// Returns true if the edge was not present before.
  bool insert(EdgeId e);
  void erase(EdgeId e);
  bool contains(EdgeId e) const { return in_.at(e) != 0; }
  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return in_.size(); }
  std::vector<EdgeId> sorted() const;

 private:
  std::vector<std::uint8_t> in_;
  std::size_t size_ = 0;
};

struct SplitResult {
  PairSet i1;
  PairSet i2;
};

SplitResult split_up(const BfsTree& tree, const ReplacementTable& table);

struct ClassificationCensus {
  std::uint32_t iteration;
  std::size_t a;
  std::size_t b;
  std::size_t c;
};

struct PhaseS1Result {
  std::size_t added = 0;                 // edges new to H
  std::vector<PairSet> banked;           // P^C_1 .. P^C_K
  std::uint32_t iterations = 0;          // iterations with a non-empty P_i
  std::size_t leftover = 0;              // pairs still pending after K iterations
  std::vector<ClassificationCensus> census;
};

struct PhaseS1Options {
  bool distinct_against_h = false;
};

/// Phase S1 over I1, adding last edges into `h`. Pending pairs that survive all
/// K iterations get their last edges added and are counted in `leftover`.
PhaseS1Result phase_s1(const Graph& g, const BfsTree& tree, const ReplacementTable& table, const PairSet& i1,
                       double epsilon, EdgeSet& h, const PhaseS1Options& options = {});

struct PhaseS2Result {
  std::size_t added = 0;          // edges new to H, S2.1 included
  std::size_t glue_added = 0;     // of which from S2.1
  std::size_t max_selection = 0;  // max distinct last edges of one Add(P, v)
};

PhaseS2Result phase_s2(const Graph& g, const BfsTree& tree, const TreeDecomposition& td, const ReplacementTable& table,
                       const std::vector<PairSet>& sets, double epsilon, EdgeSet& h);

/// Tree edges e such that some v below e, still reachable in G - e, has no
/// H-neighbour u with dist(u, G - e) + 1 = dist(v, G - e). Sorted.
std::vector<EdgeId> compute_unprotected(const Graph& g, const BfsTree& tree, const EdgeSet& h, unsigned threads = 0);

struct BuildStats {
  std::size_t b = 0;
  std::size_t r = 0;
  std::uint32_t k_eps = 0;
  std::size_t phase_s1_added = 0;
  std::size_t phase_s2_added = 0;
  std::size_t glue_added = 0;
  std::uint32_t s1_iterations = 0;
  std::size_t s1_leftover = 0;
  std::size_t max_selection = 0;
  std::size_t uncovered_pairs = 0;
  std::string route;  // "eps", "baseline" or "degenerate"
  double wall_ms = 0;
};

struct FtBfsStructure {
  Vertex source = 0;
  double epsilon = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<EdgeId> backup;      // sorted edge ids
  std::vector<EdgeId> reinforced;  // sorted edge ids
  BuildStats stats;

  /// backup together with reinforced, sorted.
  std::vector<EdgeId> edges() const;
};

struct BuildOptions {
  bool force_eps_machinery = false;
  bool s1_distinct_against_h = false;
  unsigned threads = 0;
};

FtBfsStructure build_eps_ftbfs(const Graph& g, Vertex source, double epsilon, const BuildOptions& options = {});

/// T0 plus the last edge of every uncovered pair.
EdgeSet baseline_ftbfs(const Graph& g, const BfsTree& tree, const ReplacementTable& table);
FtBfsStructure build_baseline(const Graph& g, Vertex source, double epsilon, unsigned threads = 0);

/// Sorted-key JSON. wall_ms is written as 0 unless `with_timing`.
std::string structure_to_json(const Graph& g, const FtBfsStructure& s, bool with_timing = false);
/// Throws std::invalid_argument on malformed input or edges absent from g.
FtBfsStructure structure_from_json(const Graph& g, const std::string& text);

}  // namespace ftbfs
