#include "ftbfs/bfs_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace ftbfs {

BfsTree::BfsTree(const Graph& g, Vertex source) : source_(source) {
  const auto n = g.vertex_count();
  if (source >= n) throw std::out_of_range("source out of range");
  auto forest = shortest_path_tree(GraphView(g), source);
  depth_ = std::move(forest.dist);
  parent_ = std::move(forest.parent);
  parent_edge_ = std::move(forest.parent_edge);

  children_.assign(n, {});
  lower_.assign(g.edge_count(), kNoVertex);
  for (Vertex v = 0; v < n; ++v) {
    if (parent_[v] == kNoVertex) continue;
    children_[parent_[v]].push_back(v);
    lower_[parent_edge_[v]] = v;
    tree_edges_.push_back(parent_edge_[v]);
  }
  std::sort(tree_edges_.begin(), tree_edges_.end());

  order_.push_back(source);
  for (std::size_t head = 0; head < order_.size(); ++head)
    for (const auto c : children_[order_[head]]) order_.push_back(c);

  subtree_size_.assign(n, 0);
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    subtree_size_[*it] += 1;
    if (parent_[*it] != kNoVertex) subtree_size_[parent_[*it]] += subtree_size_[*it];
  }

  // Euler intervals, iteratively.
  tin_.assign(n, 0);
  tout_.assign(n, 0);
  std::uint32_t timer = 0;
  std::vector<std::pair<Vertex, std::size_t>> stack{{source, 0}};
  tin_[source] = timer++;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < children_[v].size()) {
      const auto c = children_[v][next++];
      tin_[c] = timer++;
      stack.emplace_back(c, 0);
    } else {
      tout_[v] = timer++;
      stack.pop_back();
    }
  }

  std::size_t levels = 1;
  while ((std::size_t{1} << levels) < n) ++levels;
  up_.assign(levels, std::vector<Vertex>(n, source));
  for (const auto v : order_) up_[0][v] = parent_[v] == kNoVertex ? source : parent_[v];
  for (std::size_t k = 1; k < levels; ++k)
    for (const auto v : order_) up_[k][v] = up_[k - 1][up_[k - 1][v]];
}

Vertex BfsTree::upper(EdgeId e) const {
  if (!is_tree_edge(e)) throw std::invalid_argument("not a tree edge");
  return parent_[lower_[e]];
}

Vertex BfsTree::lower(EdgeId e) const {
  if (!is_tree_edge(e)) throw std::invalid_argument("not a tree edge");
  return lower_[e];
}

bool BfsTree::is_ancestor(Vertex a, Vertex b) const {
  return tin_[a] <= tin_[b] && tout_[b] <= tout_[a];
}

bool BfsTree::on_root_path(EdgeId e, Vertex v) const {
  return is_tree_edge(e) && reachable(v) && is_ancestor(lower_[e], v);
}

Vertex BfsTree::ancestor_at_depth(Vertex v, std::uint32_t depth) const {
  if (!reachable(v) || depth > depth_[v]) throw std::invalid_argument("no ancestor at that depth");
  auto diff = depth_[v] - depth;
  for (std::size_t k = 0; diff != 0; ++k, diff >>= 1)
    if (diff & 1u) v = up_[k][v];
  return v;
}

Vertex BfsTree::lca(Vertex u, Vertex v) const {
  if (!reachable(u) || !reachable(v)) throw std::invalid_argument("lca of an unreachable vertex");
  if (is_ancestor(u, v)) return u;
  if (is_ancestor(v, u)) return v;
  for (std::size_t k = up_.size(); k-- > 0;)
    if (!is_ancestor(up_[k][u], v)) u = up_[k][u];
  return parent_[u];
}

bool BfsTree::related(EdgeId e, EdgeId f) const {
  if (!is_tree_edge(e) || !is_tree_edge(f)) throw std::invalid_argument("related() needs tree edges");
  const auto b = lower_[e];
  const auto d = lower_[f];
  return is_ancestor(b, d) || is_ancestor(d, b);
}

Path BfsTree::path_to(Vertex v) const {
  if (!reachable(v)) throw std::invalid_argument("path_to an unreachable vertex");
  Path p;
  p.vertices.resize(depth_[v] + 1);
  p.edges.resize(depth_[v]);
  for (auto w = v;; w = parent_[w]) {
    p.vertices[depth_[w]] = w;
    if (w == source_) break;
    p.edges[depth_[w] - 1] = parent_edge_[w];
  }
  return p;
}

Vertex lca(const BfsTree& tree, Vertex u, Vertex v) { return tree.lca(u, v); }
bool related(const BfsTree& tree, EdgeId e, EdgeId f) { return tree.related(e, f); }

}  // namespace ftbfs
