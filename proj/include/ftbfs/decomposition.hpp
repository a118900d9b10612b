#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftbfs/bfs_tree.hpp"
#include "ftbfs/graph.hpp"

namespace ftbfs {

/// One path of the heavy-path decomposition, listed top (shallow) to bottom.
struct TreePath {
  std::vector<Vertex> vertices;
  std::uint32_t level = 0;
  std::size_t input_size = 0;         // vertex count of the subtree this recursion call received
  EdgeId glue = kNoEdge;              // edge joining the top to the parent path; kNoEdge at level 0
  std::size_t parent = SIZE_MAX;      // index of the parent path
  Vertex top() const { return vertices.front(); }
  Vertex bottom() const { return vertices.back(); }
};

class TreeDecomposition {
 public:
  TreeDecomposition() = default;
  TreeDecomposition(std::vector<TreePath> paths, std::size_t vertex_count);

  const std::vector<TreePath>& paths() const noexcept { return paths_; }
  /// Path containing v, or SIZE_MAX for vertices outside the tree.
  std::size_t path_of(Vertex v) const { return path_of_.at(v); }
  /// Sorted E-(TD).
  const std::vector<EdgeId>& glue_edges() const noexcept { return glue_; }
  bool is_glue(EdgeId e) const;
  std::uint32_t max_level() const noexcept { return max_level_; }

 private:
  std::vector<TreePath> paths_;
  std::vector<std::size_t> path_of_;
  std::vector<EdgeId> glue_;
  std::uint32_t max_level_ = 0;
};

/// Recursive heavy-path decomposition of the tree: from each component root,
/// descend to the child with the largest subtree (smaller id on ties).
TreeDecomposition heavy_path_decompose(const BfsTree& tree);

/// Tree-edge covered part of a path of length L: the edges at positions
/// [begin, end), where position i joins the vertices at depths i and i + 1.
struct EdgeRange {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  bool empty() const noexcept { return begin >= end; }
};

/// Exponential split of pi(s, v) into floor(log2 L) segments; a segment is an
/// EdgeRange of positions. Trailing residual positions join the last segment.
class SegmentDecomposition {
 public:
  explicit SegmentDecomposition(std::uint32_t length);

  std::uint32_t length() const noexcept { return boundaries_.back(); }
  std::size_t segment_count() const noexcept { return boundaries_.size() - 1; }
  /// Boundary depths u_{i_0} = 0 < ... < u_{i_k'} = L.
  const std::vector<std::uint32_t>& boundaries() const noexcept { return boundaries_; }
  EdgeRange segment(std::size_t j) const { return {boundaries_.at(j), boundaries_.at(j + 1)}; }
  std::size_t segment_of(std::uint32_t position) const;

 private:
  std::vector<std::uint32_t> boundaries_;
};

/// Throws std::invalid_argument for an empty path.
SegmentDecomposition segment_decompose(const Path& pi);
SegmentDecomposition segment_decompose(std::uint32_t length);

struct PathIntersections {
  std::vector<EdgeId> glue_edges;   // glue edges on pi(s, v), from s downwards
  std::vector<std::size_t> paths;   // decomposition paths meeting pi(s, v), from s downwards
};

PathIntersections tree_path_intersections(const TreeDecomposition& td, const BfsTree& tree, Vertex v);

/// Positions of pi(s, v) edges that lie on decomposition path `path`.
EdgeRange shared_edges(const TreeDecomposition& td, const BfsTree& tree, std::size_t path, Vertex v);

struct UpperLower {
  std::optional<std::size_t> upper;
  std::optional<std::size_t> lower;
};

/// First and last segments that share an edge with `psi` without lying inside it.
UpperLower upper_lower_intersect(const SegmentDecomposition& seg, EdgeRange psi);

/// "psi <level> <vertices>" lines followed by "glue <u> <v>" lines.
std::string dump_decomposition(const Graph& g, const TreeDecomposition& td);

}  // namespace ftbfs
