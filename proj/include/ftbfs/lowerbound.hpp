#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftbfs/graph.hpp"

namespace ftbfs {

/// Parameters that leave some copy without an X vertex, or make d or k zero.
class InfeasibleParameters : public std::invalid_argument {
 public:
  InfeasibleParameters(const std::string& what, std::optional<std::size_t> next_feasible_n)
      : std::invalid_argument(what), next_(next_feasible_n) {}
  /// Smallest feasible n at or above the requested one, if found.
  std::optional<std::size_t> next_feasible_n() const noexcept { return next_; }

 private:
  std::optional<std::size_t> next_;
};

/// One copy G_{eps,i} (or G^{i,j} in the multi-source family).
struct LbCopy {
  Vertex source;                // the global source this copy hangs from
  std::vector<Vertex> pi;       // s_i = v_1 .. v_{d+1} = v*
  std::vector<Vertex> z;        // z_1 .. z_d
  std::vector<std::vector<Vertex>> ladders;  // P_j, from v_j to z_j inclusive
  std::size_t block;            // index of the X block it is wired to
};

/// E^i_j: the fan (x, z_j) over x in the copy's X block, forced by pi edge e^i_j.
struct ForcedSet {
  EdgeId pi_edge;
  std::size_t copy;
  std::uint32_t j;  // 1-based position of the edge on pi_i
  Vertex z;
};

struct LowerBoundInstance {
  Graph graph;
  bool multi_source = false;
  double epsilon = 0;
  std::size_t source_count = 1;  // K
  std::uint32_t d = 0;
  std::uint32_t k = 0;
  std::vector<Vertex> sources;
  std::vector<LbCopy> copies;
  std::vector<std::vector<Vertex>> x_blocks;
  std::vector<Vertex> relays;  // multi-source only: the star centres of the X blocks
  std::vector<ForcedSet> forced;

  std::vector<EdgeId> pi_edges() const;
  std::vector<EdgeId> forced_edges(const ForcedSet& f) const;
  std::vector<EdgeId> bipartite_edges() const;
  std::size_t min_block_size() const;
  /// Distance from the copy's source to any x of its block once pi_edge fails.
  std::uint32_t forced_distance(const ForcedSet& f) const;
};

/// d = floor(n^eps / 4) (single source) or floor((n/(4K))^eps), and
/// k = floor((n/K)^(1-2 eps)), with near-integer snapping.
std::uint32_t lb_d(std::size_t n, std::size_t sources, bool multi, double epsilon);
std::uint32_t lb_k(std::size_t n, std::size_t sources, double epsilon);

/// Smallest n' >= n for which the family can be generated.
std::optional<std::size_t> min_feasible_n(std::size_t n, std::size_t sources, bool multi, double epsilon);

/// Single-source family. Requires 0 < eps < 1/2.
LowerBoundInstance gen_single_source(std::size_t n, double epsilon);
/// Multi-source family. Requires 0 < eps <= 1/2 and 1 <= K <= n.
LowerBoundInstance gen_multi_source(std::size_t n, std::size_t sources, double epsilon);

std::string lb_sidecar_json(const LowerBoundInstance& inst);
/// Rebuilds the labels from a sidecar over an already loaded graph.
LowerBoundInstance lb_from_sidecar(Graph graph, const std::string& sidecar);

struct MissingForcedEdge {
  EdgeId pi_edge;
  EdgeId missing;
};

struct AuditReport {
  bool ok = false;
  bool verified = false;
  std::size_t pi_edges = 0;
  std::size_t pi_unreinforced = 0;
  std::size_t floor = 0;        // sum of |E^i_j| over unreinforced pi edges
  std::size_t backup = 0;       // |H - E'|
  std::size_t budget = 0;       // floor(K^eps n^(1-eps) / 6)
  std::size_t budget_floor = 0; // (|Pi| - budget) * min |X block|
  std::vector<MissingForcedEdge> missing;
};

/// Checks the forced-fan containment for every unreinforced pi edge. Throws
/// std::invalid_argument when (H, E') does not verify from the instance sources.
AuditReport audit_lb(const LowerBoundInstance& inst, std::span<const EdgeId> h, std::span<const EdgeId> reinforced,
                     unsigned threads = 0);
std::string audit_to_json(const LowerBoundInstance& inst, const AuditReport& report);

}  // namespace ftbfs
