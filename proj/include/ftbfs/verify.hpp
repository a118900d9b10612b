#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ftbfs/graph.hpp"

namespace ftbfs {

struct Violation {
  Vertex source;
  EdgeId edge;
  Vertex v;
  std::uint32_t dist_h;  // kUnreachable for infinity
  std::uint32_t dist_g;
};

struct VerifyOptions {
  /// Fraction of failure edges to check; below 1 the report is partial.
  double sample = 1.0;
  std::uint64_t seed = 1;
  /// Restrict the failures to these edges (reinforced ones are still skipped).
  std::optional<std::vector<EdgeId>> failures;
  /// Run a fresh BFS pair for every failure instead of skipping failures that
  /// miss both BFS trees.
  bool naive = false;
  unsigned threads = 0;
};

struct VerificationReport {
  bool ok = true;
  bool partial = false;
  std::vector<Violation> violations;  // ordered by (source position, edge, v)
  std::size_t edges_checked = 0;
  double elapsed_ms = 0;
};

/// Checks dist(s, v, H - e) = dist(s, v, G - e) for every source s, every
/// v and every e in E(G) outside `reinforced`. Throws std::invalid_argument
/// unless reinforced is a subset of h and both are valid edge ids of g.
VerificationReport verify_structure(const Graph& g, std::span<const Vertex> sources, std::span<const EdgeId> h,
                                    std::span<const EdgeId> reinforced, const VerifyOptions& options = {});

std::string violation_to_json(const Graph& g, const Violation& v);
/// Sorted-key JSON. elapsed_ms is 0 unless `with_timing`.
std::string report_to_json(const Graph& g, const VerificationReport& report, bool with_timing = false);

/// Every shortest source-target path of the view. Throws std::length_error
/// when there are more than `limit` of them.
std::vector<Path> enumerate_all_shortest(const GraphView& view, Vertex source, Vertex target,
                                         std::size_t limit = 10000);

/// Tree edges e of T0 for which some v has dist(s, v, H - e) != dist(s, v, G - e),
/// by two BFS runs per edge. Sorted.
std::vector<EdgeId> minimal_reinforcement_oracle(const Graph& g, Vertex source, std::span<const EdgeId> h);

}  // namespace ftbfs
