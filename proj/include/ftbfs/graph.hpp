#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ftbfs {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

/// Malformed graph text. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  Vertex u;
  Vertex v;
};

struct Incidence {
  Vertex to;
  EdgeId edge;
};

/// Immutable simple undirected graph. Edge ids are the 0-based insertion order
/// and are the only input to shortest-path tie-breaking, so they are stable.
class Graph {
 public:
  Graph() = default;
  /// Throws std::invalid_argument on self-loops, duplicates or out-of-range ids.
  Graph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return adjacency_offsets_.empty() ? 0 : adjacency_offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const Edge& edge(EdgeId id) const { return edges_.at(id); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Incident edges of `v`, ordered by edge id.
  std::span<const Incidence> neighbors(Vertex v) const;
  std::size_t degree(Vertex v) const { return neighbors(v).size(); }

  std::optional<EdgeId> find_edge(Vertex a, Vertex b) const;
  Vertex other_end(EdgeId id, Vertex from) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<Incidence> adjacency_;
};

/// Parses the line-oriented "p n m" / "e u v" format; '#' starts a comment line.
Graph parse_graph(std::string_view text);
Graph load_graph(const std::string& path);
std::string format_graph(const Graph& g);

/// Mask over a base graph: deleted vertices and edges. Never copies the graph.
class GraphView {
 public:
  explicit GraphView(const Graph& g);

  /// View containing only the listed edges (all vertices kept).
  static GraphView with_edges(const Graph& g, std::span<const EdgeId> kept);

  const Graph& base() const noexcept { return *graph_; }

  void remove_vertex(Vertex v) { vertex_off_.at(v) = 1; }
  void remove_edge(EdgeId e) { edge_off_.at(e) = 1; }
  void restore_edge(EdgeId e) { edge_off_.at(e) = 0; }

  bool has_vertex(Vertex v) const noexcept { return vertex_off_[v] == 0; }
  bool has_edge(EdgeId e) const noexcept { return edge_off_[e] == 0; }
  /// Edge present and both endpoints present.
  bool usable(EdgeId e) const noexcept;

 private:
  const Graph* graph_;
  std::vector<std::uint8_t> vertex_off_;
  std::vector<std::uint8_t> edge_off_;
};

/// Non-negative integer restricted to sums of powers of two, stored sparsely as
/// the descending list of set bits. Edge sets of simple paths map to distinct
/// values, which is all the tie-breaking order needs.
class Perturbation {
 public:
  Perturbation() = default;
  static Perturbation of_edges(std::span<const EdgeId> ids);

  /// this += 2^exponent, with carry.
  void add_power_of_two(std::uint32_t exponent);

  std::span<const std::uint32_t> set_bits() const noexcept { return bits_; }
  bool is_zero() const noexcept { return bits_.empty(); }

  std::strong_ordering operator<=>(const Perturbation& other) const noexcept;
  bool operator==(const Perturbation& other) const noexcept = default;

 private:
  std::vector<std::uint32_t> bits_;  // strictly descending
};

/// Lexicographic path weight: hop count first, then perturbation.
struct TieBreakWeight {
  std::uint32_t hops = 0;
  Perturbation perturbation;

  static TieBreakWeight of_path(std::span<const EdgeId> edges);

  std::strong_ordering operator<=>(const TieBreakWeight& other) const noexcept;
  bool operator==(const TieBreakWeight& other) const noexcept = default;
};

struct Path {
  std::vector<Vertex> vertices;
  std::vector<EdgeId> edges;  // edges[i] joins vertices[i] and vertices[i+1]

  std::size_t length() const noexcept { return edges.size(); }
  Vertex front() const { return vertices.front(); }
  Vertex back() const { return vertices.back(); }
  EdgeId last_edge() const { return edges.empty() ? kNoEdge : edges.back(); }
  bool operator==(const Path&) const = default;
};

/// Builds a path from a vertex sequence; throws if consecutive vertices are not adjacent.
Path path_from_vertices(const Graph& g, std::span<const Vertex> vertices);
/// Checks adjacency and simplicity.
bool is_simple_path(const Graph& g, const Path& p);

/// Plain hop-count BFS distances from `source`; kUnreachable for unreachable vertices.
std::vector<std::uint32_t> bfs_distances(const GraphView& view, Vertex source);
/// Hop distance between two vertices of a view, stopping the search early.
std::uint32_t hop_distance(const GraphView& view, Vertex source, Vertex target);

/// The unique minimum path under TieBreakWeight, or nullopt if `target` is unreachable.
std::optional<Path> shortest_path(const GraphView& view, Vertex source, Vertex target);

/// Parent links of the W-shortest-path tree of a view.
struct ShortestPathForest {
  std::vector<std::uint32_t> dist;
  std::vector<Vertex> parent;       // kNoVertex for the source and unreachable vertices
  std::vector<EdgeId> parent_edge;  // kNoEdge likewise
};
ShortestPathForest shortest_path_tree(const GraphView& view, Vertex source);

}  // namespace ftbfs
