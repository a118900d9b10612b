#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ftbfs/bfs_tree.hpp"
#include "ftbfs/graph.hpp"

namespace ftbfs {

/// Canonical replacement path P_{v,e}: a shortest source-v path avoiding e.
/// For new-ending paths the last edge is outside T0 and the path splits as
/// pi(s, d) followed by a detour that meets pi(s, v) only at d and v.
struct ReplacementPath {
  Vertex target = kNoVertex;
  EdgeId failing_edge = kNoEdge;
  Path path;
  bool new_ending = false;
  Vertex divergence = kNoVertex;  // kNoVertex unless new_ending
  std::size_t detour_offset = 0;  // index of the divergence point in path.vertices

  EdgeId last_edge() const { return path.last_edge(); }
  /// Vertices of D(P), from the divergence point to the target; empty unless new_ending.
  std::span<const Vertex> detour() const;
  std::size_t detour_length() const { return new_ending ? path.length() - detour_offset : 0; }
};

struct PairKey {
  Vertex v;
  EdgeId e;
  auto operator<=>(const PairKey&) const = default;
};

using PairIndex = std::uint32_t;

/// Output of Pcons over all (v, e in pi(s, v)) pairs.
class ReplacementTable {
 public:
  ReplacementTable() = default;
  ReplacementTable(std::vector<ReplacementPath> paths, std::vector<PairKey> bridges, std::size_t vertex_count);

  /// Pairs that have a replacement path, sorted by (v, e).
  const std::vector<ReplacementPath>& paths() const noexcept { return paths_; }
  const ReplacementPath& at(PairIndex i) const { return paths_.at(i); }
  std::optional<PairIndex> find(Vertex v, EdgeId e) const;

  /// Pairs whose failing edge disconnects v ("no replacement"), sorted.
  const std::vector<PairKey>& bridges() const noexcept { return bridges_; }

  /// UP: indices of new-ending pairs, sorted.
  const std::vector<PairIndex>& uncovered() const noexcept { return uncovered_; }
  /// UP(v).
  std::span<const PairIndex> uncovered_of(Vertex v) const;

 private:
  std::vector<ReplacementPath> paths_;
  std::vector<PairKey> bridges_;
  std::vector<PairIndex> uncovered_;
  std::vector<std::size_t> uncovered_offsets_;
};

/// Pcons for one pair. `dist_without_e` may carry precomputed BFS distances of
/// G minus e; it is computed when null. Returns nullopt when e separates v from
/// the source. Throws std::invalid_argument if e is not on pi(s, v).
std::optional<ReplacementPath> pcons_pair(const Graph& g, const BfsTree& tree, Vertex v, EdgeId e,
                                          const std::vector<std::uint32_t>* dist_without_e = nullptr);

/// Like pcons_pair, but a pair with e off pi(s, v) yields pi(s, v) itself.
std::optional<ReplacementPath> replacement_path(const Graph& g, const BfsTree& tree, Vertex v, EdgeId e);

/// Pcons over every reachable v and every e on pi(s, v). Parallel over failing
/// edges; the result does not depend on `threads`.
ReplacementTable pcons_all(const Graph& g, const BfsTree& tree, unsigned threads = 0);

/// Same-target pairs ordered by increasing distance of the failing edge from
/// the target. Throws std::invalid_argument on mixed targets.
std::vector<PairIndex> detour_order(const BfsTree& tree, const ReplacementTable& table,
                                    std::span<const PairIndex> pairs);

/// Distance in edges between tree edge e and its descendant v along pi(s, v):
/// 0 when e enters v.
std::uint32_t edge_distance_to(const BfsTree& tree, EdgeId e, Vertex v);

/// One JSON object per line: {"e":[u,w],"new_ending":..,"path":[..],"v":..}.
std::string dump_replacement_paths(const Graph& g, const ReplacementTable& table);

}  // namespace ftbfs
