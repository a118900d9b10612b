#include "ftbfs/replacement.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

#include "parallel.hpp"

namespace ftbfs {

std::span<const Vertex> ReplacementPath::detour() const {
  if (!new_ending) return {};
  return std::span<const Vertex>(path.vertices).subspan(detour_offset);
}

ReplacementTable::ReplacementTable(std::vector<ReplacementPath> paths, std::vector<PairKey> bridges,
                                   std::size_t vertex_count)
    : paths_(std::move(paths)), bridges_(std::move(bridges)) {
  std::sort(paths_.begin(), paths_.end(), [](const auto& a, const auto& b) {
    return PairKey{a.target, a.failing_edge} < PairKey{b.target, b.failing_edge};
  });
  std::sort(bridges_.begin(), bridges_.end());
  uncovered_offsets_.assign(vertex_count + 1, 0);
  for (PairIndex i = 0; i < paths_.size(); ++i) {
    if (!paths_[i].new_ending) continue;
    uncovered_.push_back(i);
    ++uncovered_offsets_.at(paths_[i].target + 1);
  }
  for (std::size_t v = 0; v < vertex_count; ++v) uncovered_offsets_[v + 1] += uncovered_offsets_[v];
}

std::optional<PairIndex> ReplacementTable::find(Vertex v, EdgeId e) const {
  const auto it = std::lower_bound(paths_.begin(), paths_.end(), PairKey{v, e}, [](const auto& p, const PairKey& k) {
    return PairKey{p.target, p.failing_edge} < k;
  });
  if (it == paths_.end() || it->target != v || it->failing_edge != e) return std::nullopt;
  return static_cast<PairIndex>(it - paths_.begin());
}

std::span<const PairIndex> ReplacementTable::uncovered_of(Vertex v) const {
  if (v + 1 >= uncovered_offsets_.size()) return {};
  return std::span<const PairIndex>(uncovered_).subspan(uncovered_offsets_[v],
                                                         uncovered_offsets_[v + 1] - uncovered_offsets_[v]);
}

namespace {

// First vertex of p whose successor leaves pi(s, v); requires p to end at v.
std::size_t first_divergence(const BfsTree& tree, const Path& p, Vertex v) {
  auto on_pi = [&](Vertex w) { return tree.reachable(w) && tree.is_ancestor(w, v); };
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
    if (!on_pi(p.vertices[i + 1])) return i;
  return p.vertices.size() - 1;
}

}  // namespace

std::optional<ReplacementPath> pcons_pair(const Graph& g, const BfsTree& tree, Vertex v, EdgeId e,
                                          const std::vector<std::uint32_t>* dist_without_e) {
  if (!tree.on_root_path(e, v)) throw std::invalid_argument("failing edge is not on pi(s, v)");
  const auto s = tree.source();

  std::vector<std::uint32_t> local;
  if (dist_without_e == nullptr) {
    GraphView without(g);
    without.remove_edge(e);
    local = bfs_distances(without, s);
    dist_without_e = &local;
  }
  const auto target_dist = (*dist_without_e)[v];
  if (target_dist == kUnreachable) return std::nullopt;

  ReplacementPath rp;
  rp.target = v;
  rp.failing_edge = e;

  // Step 1: keep only tree edges at v.
  {
    GraphView view(g);
    view.remove_edge(e);
    for (const auto& inc : g.neighbors(v))
      if (!tree.is_tree_edge(inc.edge)) view.remove_edge(inc.edge);
    if (hop_distance(view, s, v) == target_dist) {
      rp.path = *shortest_path(view, s, v);
      rp.new_ending = false;
      return rp;
    }
  }

  // Step 2: the leftmost feasible divergence index j*.
  const auto pi = tree.path_to(v);
  const auto k = pi.vertices.size() - 1;
  const auto i = tree.depth(tree.upper(e));
  for (std::uint32_t j = 0; j <= i; ++j) {
    GraphView view(g);
    view.remove_edge(e);
    for (std::size_t idx = j + 1; idx < k; ++idx) view.remove_vertex(pi.vertices[idx]);
    if (hop_distance(view, s, v) != target_dist) continue;
    rp.path = *shortest_path(view, s, v);
    rp.new_ending = true;
    rp.detour_offset = first_divergence(tree, rp.path, v);
    rp.divergence = rp.path.vertices[rp.detour_offset];
    if (tree.is_tree_edge(rp.last_edge()))
      throw std::logic_error("pcons: step-2 path ends with a tree edge");
    return rp;
  }
  throw std::logic_error("pcons: no feasible divergence index");
}

std::optional<ReplacementPath> replacement_path(const Graph& g, const BfsTree& tree, Vertex v, EdgeId e) {
  if (!tree.reachable(v)) return std::nullopt;
  if (!tree.on_root_path(e, v)) {
    ReplacementPath rp;
    rp.target = v;
    rp.failing_edge = e;
    rp.path = tree.path_to(v);
    return rp;
  }
  return pcons_pair(g, tree, v, e);
}

ReplacementTable pcons_all(const Graph& g, const BfsTree& tree, unsigned threads) {
  const auto& tree_edges = tree.edges();
  std::vector<std::vector<ReplacementPath>> found(tree_edges.size());
  std::vector<std::vector<PairKey>> cut(tree_edges.size());

  detail::parallel_for(tree_edges.size(), threads, [&](std::size_t idx) {
    const auto e = tree_edges[idx];
    GraphView without(g);
    without.remove_edge(e);
    const auto dist = bfs_distances(without, tree.source());
    std::vector<Vertex> stack{tree.lower(e)};
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      if (auto rp = pcons_pair(g, tree, v, e, &dist))
        found[idx].push_back(std::move(*rp));
      else
        cut[idx].push_back({v, e});
      for (const auto c : tree.children(v)) stack.push_back(c);
    }
  });

  std::vector<ReplacementPath> paths;
  std::vector<PairKey> bridges;
  for (std::size_t idx = 0; idx < tree_edges.size(); ++idx) {
    std::move(found[idx].begin(), found[idx].end(), std::back_inserter(paths));
    bridges.insert(bridges.end(), cut[idx].begin(), cut[idx].end());
  }
  return ReplacementTable(std::move(paths), std::move(bridges), g.vertex_count());
}

std::uint32_t edge_distance_to(const BfsTree& tree, EdgeId e, Vertex v) {
  if (!tree.on_root_path(e, v)) throw std::invalid_argument("edge is not on pi(s, v)");
  return tree.depth(v) - tree.depth(tree.lower(e));
}

std::vector<PairIndex> detour_order(const BfsTree& tree, const ReplacementTable& table,
                                    std::span<const PairIndex> pairs) {
  std::vector<PairIndex> out(pairs.begin(), pairs.end());
  if (out.empty()) return out;
  const auto v = table.at(out.front()).target;
  for (const auto p : out)
    if (table.at(p).target != v) throw std::invalid_argument("detour_order: pairs have different targets");
  std::sort(out.begin(), out.end(), [&](PairIndex a, PairIndex b) {
    return edge_distance_to(tree, table.at(a).failing_edge, v) < edge_distance_to(tree, table.at(b).failing_edge, v);
  });
  return out;
}

std::string dump_replacement_paths(const Graph& g, const ReplacementTable& table) {
  std::string out;
  for (const auto& rp : table.paths()) {
    const auto& ed = g.edge(rp.failing_edge);
    nlohmann::json line = {{"v", rp.target},
                           {"e", {std::min(ed.u, ed.v), std::max(ed.u, ed.v)}},
                           {"path", rp.path.vertices},
                           {"new_ending", rp.new_ending}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace ftbfs
