#include "ftbfs/verify.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

#include "json.hpp"

#include "ftbfs/bfs_tree.hpp"
#include "parallel.hpp"

namespace ftbfs {

namespace {

std::vector<EdgeId> checked_ids(const Graph& g, std::span<const EdgeId> ids, const char* what) {
  std::vector<EdgeId> out(ids.begin(), ids.end());
  for (const auto e : out)
    if (e >= g.edge_count()) throw std::invalid_argument(std::string(what) + ": edge id out of range");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint8_t> parent_edge_mask(const Graph& g, const GraphView& view, Vertex s) {
  std::vector<std::uint8_t> mask(g.edge_count(), 0);
  for (const auto e : shortest_path_tree(view, s).parent_edge)
    if (e != kNoEdge) mask[e] = 1;
  return mask;
}

nlohmann::json distance_json(std::uint32_t d) {
  if (d == kUnreachable) return nullptr;
  return d;
}

}  // namespace

VerificationReport verify_structure(const Graph& g, std::span<const Vertex> sources, std::span<const EdgeId> h,
                                    std::span<const EdgeId> reinforced, const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto h_ids = checked_ids(g, h, "H");
  const auto r_ids = checked_ids(g, reinforced, "reinforced");
  if (!std::includes(h_ids.begin(), h_ids.end(), r_ids.begin(), r_ids.end()))
    throw std::invalid_argument("reinforced edges must be a subset of H");
  for (const auto s : sources)
    if (s >= g.vertex_count()) throw std::invalid_argument("source vertex out of range");
  if (!(options.sample > 0.0 && options.sample <= 1.0)) throw std::invalid_argument("sample must lie in (0,1]");

  std::vector<std::uint8_t> is_reinforced(g.edge_count(), 0);
  for (const auto e : r_ids) is_reinforced[e] = 1;

  std::vector<EdgeId> failures;
  if (options.failures) {
    failures = checked_ids(g, *options.failures, "failures");
  } else {
    failures.resize(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e) failures[e] = e;
  }
  std::erase_if(failures, [&](EdgeId e) { return is_reinforced[e] != 0; });

  VerificationReport report;
  if (options.sample < 1.0) {
    report.partial = true;
    std::mt19937_64 rng(options.seed);
    std::bernoulli_distribution keep(options.sample);
    std::erase_if(failures, [&](EdgeId) { return !keep(rng); });
  }

  const auto h_base = GraphView::with_edges(g, h_ids);
  const GraphView g_base(g);

  for (const auto s : sources) {
    const auto dist_g = bfs_distances(g_base, s);
    const auto dist_h = bfs_distances(h_base, s);
    const auto g_tree = parent_edge_mask(g, g_base, s);
    const auto h_tree = parent_edge_mask(g, h_base, s);

    std::vector<std::vector<Violation>> found(failures.size());
    detail::parallel_for(failures.size(), options.threads, [&](std::size_t idx) {
      const auto e = failures[idx];
      const std::vector<std::uint32_t>* dg = &dist_g;
      const std::vector<std::uint32_t>* dh = &dist_h;
      std::vector<std::uint32_t> local_g, local_h;
      if (options.naive || g_tree[e]) {
        GraphView view(g);
        view.remove_edge(e);
        local_g = bfs_distances(view, s);
        dg = &local_g;
      }
      if (options.naive || h_tree[e]) {
        auto view = h_base;
        view.remove_edge(e);
        local_h = bfs_distances(view, s);
        dh = &local_h;
      }
      for (Vertex v = 0; v < g.vertex_count(); ++v)
        if ((*dg)[v] != (*dh)[v]) found[idx].push_back({s, e, v, (*dh)[v], (*dg)[v]});
    });
    for (auto& list : found) report.violations.insert(report.violations.end(), list.begin(), list.end());
    report.edges_checked += failures.size();
  }
  report.ok = report.violations.empty();
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string violation_to_json(const Graph& g, const Violation& v) {
  const auto& ed = g.edge(v.edge);
  nlohmann::json j = {{"source", v.source},
                      {"edge", {std::min(ed.u, ed.v), std::max(ed.u, ed.v)}},
                      {"v", v.v},
                      {"dist_h", distance_json(v.dist_h)},
                      {"dist_g", distance_json(v.dist_g)}};
  return j.dump();
}

std::string report_to_json(const Graph& g, const VerificationReport& report, bool with_timing) {
  nlohmann::json j;
  j["ok"] = report.ok;
  j["partial"] = report.partial;
  j["edges_checked"] = report.edges_checked;
  j["elapsed_ms"] = with_timing ? report.elapsed_ms : 0.0;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : report.violations) j["violations"].push_back(nlohmann::json::parse(violation_to_json(g, v)));
  return j.dump() + "\n";
}

std::vector<Path> enumerate_all_shortest(const GraphView& view, Vertex source, Vertex target, std::size_t limit) {
  const auto& g = view.base();
  const auto dist = bfs_distances(view, source);
  if (dist.at(target) == kUnreachable) return {};

  // ways[v]: number of shortest paths from v to target, saturated at limit + 1
  std::vector<Vertex> order;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (dist[v] != kUnreachable && dist[v] <= dist[target]) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return dist[a] > dist[b]; });
  std::vector<std::size_t> ways(g.vertex_count(), 0);
  ways[target] = 1;
  for (const auto v : order) {
    if (v == target) continue;
    std::size_t total = 0;
    for (const auto& inc : g.neighbors(v))
      if (view.usable(inc.edge) && dist[inc.to] == dist[v] + 1) total = std::min(limit + 1, total + ways[inc.to]);
    ways[v] = total;
  }
  if (ways[source] > limit) throw std::length_error("more than " + std::to_string(limit) + " shortest paths");

  std::vector<Path> out;
  Path current;
  current.vertices.push_back(source);
  auto walk = [&](auto&& self, Vertex v) -> void {
    if (v == target) {
      out.push_back(current);
      return;
    }
    for (const auto& inc : g.neighbors(v)) {
      if (!view.usable(inc.edge) || dist[inc.to] != dist[v] + 1 || ways[inc.to] == 0) continue;
      current.vertices.push_back(inc.to);
      current.edges.push_back(inc.edge);
      self(self, inc.to);
      current.vertices.pop_back();
      current.edges.pop_back();
    }
  };
  walk(walk, source);
  std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) { return a.vertices < b.vertices; });
  return out;
}

std::vector<EdgeId> minimal_reinforcement_oracle(const Graph& g, Vertex source, std::span<const EdgeId> h) {
  const BfsTree tree(g, source);
  const auto h_ids = checked_ids(g, h, "H");
  for (const auto e : tree.edges())
    if (!std::binary_search(h_ids.begin(), h_ids.end(), e)) throw std::invalid_argument("H must contain T0");
  std::vector<EdgeId> out;
  for (const auto e : tree.edges()) {
    GraphView in_g(g);
    in_g.remove_edge(e);
    auto in_h = GraphView::with_edges(g, h_ids);
    in_h.remove_edge(e);
    if (bfs_distances(in_g, source) != bfs_distances(in_h, source)) out.push_back(e);
  }
  return out;
}

}  // namespace ftbfs
