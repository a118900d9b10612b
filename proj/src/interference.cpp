#include "ftbfs/interference.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ftbfs {

bool PairSet::contains(PairIndex p) const { return std::binary_search(pairs.begin(), pairs.end(), p); }

PairSet make_pair_set(std::string label, std::vector<PairIndex> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return {std::move(label), std::move(pairs)};
}

namespace {

std::span<const Vertex> detour_interior(const ReplacementPath& p) {
  const auto d = p.detour();
  if (d.size() <= 2) return {};
  return d.subspan(1, d.size() - 2);
}

void require_new_ending(const ReplacementPath& p) {
  if (!p.new_ending) throw std::invalid_argument("interference is defined for new-ending paths only");
}

}  // namespace

bool interferes(const ReplacementPath& p, const ReplacementPath& q) {
  require_new_ending(p);
  require_new_ending(q);
  if (p.target == q.target) throw std::invalid_argument("interferes: pairs share a target");
  const auto a = detour_interior(p);
  const auto b = detour_interior(q);
  std::unordered_set<Vertex> seen(a.begin(), a.end());
  return std::any_of(b.begin(), b.end(), [&](Vertex w) { return seen.count(w) != 0; });
}

bool pi_intersects(const BfsTree& tree, const ReplacementPath& p, const ReplacementPath& q) {
  require_new_ending(p);
  const auto v = p.target;
  const auto t = q.target;
  const auto top = tree.lca(v, t);
  const auto top_depth = tree.depth(top);
  for (const auto w : p.detour())
    if (tree.reachable(w) && tree.depth(w) > top_depth && tree.is_ancestor(w, t)) return true;
  return false;
}

InterferenceIndex::InterferenceIndex(const BfsTree& tree, const ReplacementTable& table,
                                     std::span<const PairIndex> universe)
    : partners_(table.paths().size()) {
  std::unordered_map<Vertex, std::vector<PairIndex>> buckets;
  for (const auto p : universe) {
    require_new_ending(table.at(p));
    for (const auto w : detour_interior(table.at(p))) buckets[w].push_back(p);
  }
  for (auto& [w, members] : buckets) {
    for (std::size_t x = 0; x < members.size(); ++x) {
      const auto& px = table.at(members[x]);
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const auto& py = table.at(members[y]);
        if (px.target == py.target || tree.related(px.failing_edge, py.failing_edge)) continue;
        partners_[members[x]].push_back(members[y]);
        partners_[members[y]].push_back(members[x]);
      }
    }
  }
  for (auto& list : partners_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    relation_count_ += list.size();
  }
  relation_count_ /= 2;
}

std::span<const PairIndex> InterferenceIndex::nsim_partners(PairIndex p) const { return partners_.at(p); }

PairSet i_nsim(const BfsTree& tree, const ReplacementTable& table, PairIndex pair, const PairSet& universe) {
  const auto& p = table.at(pair);
  std::vector<PairIndex> out;
  for (const auto q : universe.pairs) {
    const auto& other = table.at(q);
    if (other.target == p.target) continue;
    if (interferes(p, other) && !tree.related(p.failing_edge, other.failing_edge)) out.push_back(q);
  }
  return make_pair_set("I_nsim", std::move(out));
}

TypeClassification classify_types(const BfsTree& tree, const ReplacementTable& table, const InterferenceIndex& index,
                                  const PairSet& set) {
  std::vector<std::uint8_t> member(table.paths().size(), 0);
  for (const auto p : set.pairs) member[p] = 1;

  std::vector<std::uint8_t> type_a(table.paths().size(), 0);
  TypeClassification out{{set.label + "^A", {}}, {set.label + "^B", {}}, {set.label + "^C", {}}};
  for (const auto p : set.pairs) {
    for (const auto q : index.nsim_partners(p)) {
      if (member[q] && pi_intersects(tree, table.at(p), table.at(q))) {
        type_a[p] = 1;
        break;
      }
    }
    if (type_a[p]) out.a.pairs.push_back(p);
  }
  for (const auto p : set.pairs) {
    if (type_a[p]) continue;
    const auto partners = index.nsim_partners(p);
    const bool b = std::any_of(partners.begin(), partners.end(), [&](PairIndex q) { return member[q] && !type_a[q]; });
    (b ? out.b : out.c).pairs.push_back(p);
  }
  return out;
}

TypeClassification classify_types(const BfsTree& tree, const ReplacementTable& table, const PairSet& set) {
  const InterferenceIndex index(tree, table, set.pairs);
  return classify_types(tree, table, index, set);
}

bool is_sim_set(const BfsTree& tree, const ReplacementTable& table, const PairSet& set) {
  const InterferenceIndex index(tree, table, set.pairs);
  return index.relation_count() == 0;
}

}  // namespace ftbfs
