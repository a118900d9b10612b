#pragma once

#include <cstdint>
#include <vector>

#include "ftbfs/graph.hpp"

namespace ftbfs {

/// The tree T0 of unique W-shortest paths from a source, with ancestor and LCA
/// support. Tree edges are oriented away from the source: for tree edge e,
/// upper(e) is the shallow endpoint and lower(e) the deep one.
class BfsTree {
 public:
  BfsTree(const Graph& g, Vertex source);

  Vertex source() const noexcept { return source_; }
  std::size_t vertex_count() const noexcept { return depth_.size(); }

  bool reachable(Vertex v) const { return depth_.at(v) != kUnreachable; }
  std::uint32_t depth(Vertex v) const { return depth_.at(v); }
  Vertex parent(Vertex v) const { return parent_.at(v); }
  EdgeId parent_edge(Vertex v) const { return parent_edge_.at(v); }
  const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }

  /// Sorted ids of the tree edges.
  const std::vector<EdgeId>& edges() const noexcept { return tree_edges_; }
  bool is_tree_edge(EdgeId e) const { return e < lower_.size() && lower_[e] != kNoVertex; }
  Vertex upper(EdgeId e) const;
  Vertex lower(EdgeId e) const;

  /// Reachable vertices in BFS order (source first, non-decreasing depth).
  const std::vector<Vertex>& order() const noexcept { return order_; }
  std::size_t subtree_size(Vertex v) const { return subtree_size_.at(v); }

  /// True iff `a` is an ancestor of `b` (inclusive). Both must be reachable.
  bool is_ancestor(Vertex a, Vertex b) const;
  /// True iff tree edge `e` lies on pi(source, v).
  bool on_root_path(EdgeId e, Vertex v) const;

  /// Throws std::invalid_argument for unreachable vertices.
  Vertex lca(Vertex u, Vertex v) const;
  /// The (~) relation: both edges lie on one root-to-vertex path.
  /// Throws std::invalid_argument for non-tree edges.
  bool related(EdgeId e, EdgeId f) const;

  /// pi(source, v) as a path; throws for unreachable v.
  Path path_to(Vertex v) const;
  /// Ancestor of v at the given depth.
  Vertex ancestor_at_depth(Vertex v, std::uint32_t depth) const;

 private:
  Vertex source_;
  std::vector<std::uint32_t> depth_;
  std::vector<Vertex> parent_;
  std::vector<EdgeId> parent_edge_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<EdgeId> tree_edges_;
  std::vector<Vertex> lower_;  // per edge id: deep endpoint or kNoVertex
  std::vector<Vertex> order_;
  std::vector<std::size_t> subtree_size_;
  std::vector<std::uint32_t> tin_;
  std::vector<std::uint32_t> tout_;
  std::vector<std::vector<Vertex>> up_;  // binary lifting; up_[k][v] = 2^k-th ancestor
};

Vertex lca(const BfsTree& tree, Vertex u, Vertex v);
bool related(const BfsTree& tree, EdgeId e, EdgeId f);

}  // namespace ftbfs
