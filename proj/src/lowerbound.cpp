#include "ftbfs/lowerbound.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "ftbfs/verify.hpp"

namespace ftbfs {

namespace {

double snapped_pow(double base, double exponent) {
  const double x = std::exp(exponent * std::log(base));
  const double nearest = std::round(x);
  return std::abs(x - nearest) < 1e-9 ? nearest : x;
}

std::uint64_t copy_core(std::uint64_t d) { return d * d + 5 * d + 1; }

// X vertices left once everything else is placed; negative when over budget.
std::int64_t x_total(std::size_t n, std::size_t sources, bool multi, std::uint32_t d, std::uint32_t k) {
  const auto copies = static_cast<std::int64_t>(multi ? sources * k : k);
  const auto fixed = multi ? static_cast<std::int64_t>(sources + k) : std::int64_t{1};
  return static_cast<std::int64_t>(n) - fixed - copies * static_cast<std::int64_t>(copy_core(d));
}

bool feasible(std::size_t n, std::size_t sources, bool multi, double epsilon) {
  const auto d = lb_d(n, sources, multi, epsilon);
  const auto k = lb_k(n, sources, epsilon);
  if (d == 0 || k == 0) return false;
  return x_total(n, sources, multi, d, k) >= static_cast<std::int64_t>(k);
}

std::optional<std::size_t> next_feasible(std::size_t n, std::size_t sources, bool multi, double epsilon) {
  // d >= 1 needs n^eps >= 4 (single) or n >= 4K (multi)
  const double start = multi ? 4.0 * static_cast<double>(sources) : std::pow(4.0, 1.0 / epsilon);
  std::size_t m = n;
  if (start > static_cast<double>(n)) {
    if (start > 1e12) return std::nullopt;
    m = std::max<std::size_t>(n, static_cast<std::size_t>(start * (1 - 1e-9)) - 1);
  }
  for (std::size_t step = 0; step < 50'000'000; ++step, ++m)
    if (feasible(m, sources, multi, epsilon)) return m;
  return std::nullopt;
}

struct Builder {
  std::size_t next = 0;
  std::vector<Edge> edges;
  Vertex fresh() { return static_cast<Vertex>(next++); }
  void link(Vertex a, Vertex b) { edges.push_back({a, b}); }
};

std::vector<std::size_t> spread(std::int64_t total, std::size_t parts) {
  std::vector<std::size_t> out(parts, static_cast<std::size_t>(total) / parts);
  for (std::size_t i = 0; i < static_cast<std::size_t>(total) % parts; ++i) ++out[i];
  return out;
}

// Copy skeleton: pi, ladders and Z. X wiring is done by the caller.
LbCopy make_copy(Builder& b, Vertex source, std::uint32_t d, std::size_t block) {
  LbCopy c;
  c.source = source;
  c.block = block;
  for (std::uint32_t j = 0; j <= d; ++j) c.pi.push_back(b.fresh());
  for (std::uint32_t j = 0; j < d; ++j) b.link(c.pi[j], c.pi[j + 1]);
  for (std::uint32_t j = 1; j <= d; ++j) {
    const auto t = 6 + 2 * (d - j);
    std::vector<Vertex> ladder{c.pi[j - 1]};
    for (std::uint32_t q = 1; q < t; ++q) {
      ladder.push_back(b.fresh());
      b.link(ladder[q - 1], ladder[q]);
    }
    c.z.push_back(ladder.back());
    c.ladders.push_back(std::move(ladder));
  }
  return c;
}

void check_instance(const LowerBoundInstance& inst, std::size_t n) {
  if (inst.graph.vertex_count() != n) throw std::logic_error("lower-bound generator: vertex count mismatch");
  for (const auto& c : inst.copies)
    for (std::uint32_t j = 1; j <= inst.d; ++j)
      if (c.ladders[j - 1].size() != 6 + 2 * (inst.d - j)) throw std::logic_error("lower-bound generator: ladder size");
  // fans are disjoint by construction; their union must be the whole bipartite part
  std::size_t fan_total = 0;
  for (const auto& f : inst.forced) fan_total += inst.forced_edges(f).size();
  if (fan_total != inst.bipartite_edges().size()) throw std::logic_error("lower-bound generator: fan partition");
  if (n > 300) return;
  for (const auto& f : inst.forced) {
    GraphView view(inst.graph);
    view.remove_edge(f.pi_edge);
    const auto dist = bfs_distances(view, inst.copies[f.copy].source);
    for (const auto x : inst.x_blocks[inst.copies[f.copy].block])
      if (dist[x] != inst.forced_distance(f)) throw std::logic_error("lower-bound generator: forced route length");
  }
}

void fill_forced(LowerBoundInstance& inst) {
  for (std::size_t c = 0; c < inst.copies.size(); ++c) {
    const auto& copy = inst.copies[c];
    for (std::uint32_t j = 1; j <= inst.d; ++j)
      inst.forced.push_back({*inst.graph.find_edge(copy.pi[j - 1], copy.pi[j]), c, j, copy.z[j - 1]});
  }
}

[[noreturn]] void infeasible(std::size_t n, std::size_t sources, bool multi, double epsilon) {
  const auto next = next_feasible(n, sources, multi, epsilon);
  std::string msg = "infeasible parameters for n=" + std::to_string(n);
  msg += next ? "; minimum feasible n is " + std::to_string(*next) : "; no feasible n found";
  throw InfeasibleParameters(msg, next);
}

}  // namespace

std::uint32_t lb_d(std::size_t n, std::size_t sources, bool multi, double epsilon) {
  if (!multi) return static_cast<std::uint32_t>(std::floor(snapped_pow(static_cast<double>(n), epsilon) / 4.0));
  return static_cast<std::uint32_t>(
      std::floor(snapped_pow(static_cast<double>(n) / (4.0 * static_cast<double>(sources)), epsilon)));
}

std::uint32_t lb_k(std::size_t n, std::size_t sources, double epsilon) {
  return static_cast<std::uint32_t>(
      std::floor(snapped_pow(static_cast<double>(n) / static_cast<double>(sources), 1.0 - 2.0 * epsilon)));
}

std::optional<std::size_t> min_feasible_n(std::size_t n, std::size_t sources, bool multi, double epsilon) {
  return next_feasible(n, sources, multi, epsilon);
}

LowerBoundInstance gen_single_source(std::size_t n, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0,1/2)");
  if (!feasible(n, 1, false, epsilon)) infeasible(n, 1, false, epsilon);

  LowerBoundInstance inst;
  inst.epsilon = epsilon;
  inst.d = lb_d(n, 1, false, epsilon);
  inst.k = lb_k(n, 1, epsilon);
  Builder b;
  const auto s = b.fresh();
  inst.sources = {s};
  const auto sizes = spread(x_total(n, 1, false, inst.d, inst.k), inst.k);
  for (std::uint32_t i = 0; i < inst.k; ++i) {
    auto copy = make_copy(b, s, inst.d, i);
    b.link(s, copy.pi.front());
    std::vector<Vertex> xs;
    for (std::size_t t = 0; t < sizes[i]; ++t) {
      xs.push_back(b.fresh());
      b.link(copy.pi.back(), xs.back());
    }
    for (const auto x : xs)
      for (const auto z : copy.z) b.link(x, z);
    inst.x_blocks.push_back(std::move(xs));
    inst.copies.push_back(std::move(copy));
  }
  inst.graph = Graph(b.next, std::move(b.edges));
  fill_forced(inst);
  check_instance(inst, n);
  return inst;
}

LowerBoundInstance gen_multi_source(std::size_t n, std::size_t sources, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw std::invalid_argument("epsilon must lie in (0,1/2]");
  if (sources < 1 || sources > n) throw std::invalid_argument("source count must lie in [1,n]");
  if (!feasible(n, sources, true, epsilon)) infeasible(n, sources, true, epsilon);

  LowerBoundInstance inst;
  inst.multi_source = true;
  inst.epsilon = epsilon;
  inst.source_count = sources;
  inst.d = lb_d(n, sources, true, epsilon);
  inst.k = lb_k(n, sources, epsilon);
  Builder b;
  for (std::size_t i = 0; i < sources; ++i) inst.sources.push_back(b.fresh());
  const auto sizes = spread(x_total(n, sources, true, inst.d, inst.k), inst.k);
  for (std::uint32_t j = 0; j < inst.k; ++j) {
    const auto relay = b.fresh();
    inst.relays.push_back(relay);
    std::vector<Vertex> xs;
    for (std::size_t t = 0; t < sizes[j]; ++t) {
      xs.push_back(b.fresh());
      b.link(relay, xs.back());
    }
    for (std::size_t i = 0; i < sources; ++i) {
      auto copy = make_copy(b, inst.sources[i], inst.d, j);
      b.link(inst.sources[i], copy.pi.front());
      b.link(relay, copy.pi.back());
      for (const auto x : xs)
        for (const auto z : copy.z) b.link(x, z);
      inst.copies.push_back(std::move(copy));
    }
    inst.x_blocks.push_back(std::move(xs));
  }
  inst.graph = Graph(b.next, std::move(b.edges));
  fill_forced(inst);
  check_instance(inst, n);
  return inst;
}

std::vector<EdgeId> LowerBoundInstance::pi_edges() const {
  std::vector<EdgeId> out;
  for (const auto& f : forced) out.push_back(f.pi_edge);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> LowerBoundInstance::forced_edges(const ForcedSet& f) const {
  std::vector<EdgeId> out;
  for (const auto x : x_blocks.at(copies.at(f.copy).block)) {
    const auto e = graph.find_edge(x, f.z);
    if (!e) throw std::logic_error("lower-bound instance: missing bipartite edge");
    out.push_back(*e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> LowerBoundInstance::bipartite_edges() const {
  std::vector<std::uint8_t> is_z(graph.vertex_count(), 0), is_x(graph.vertex_count(), 0);
  for (const auto& c : copies)
    for (const auto z : c.z) is_z[z] = 1;
  for (const auto& block : x_blocks)
    for (const auto x : block) is_x[x] = 1;
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const auto& ed = graph.edge(e);
    if ((is_x[ed.u] && is_z[ed.v]) || (is_z[ed.u] && is_x[ed.v])) out.push_back(e);
  }
  return out;
}

std::size_t LowerBoundInstance::min_block_size() const {
  std::size_t out = SIZE_MAX;
  for (const auto& block : x_blocks) out = std::min(out, block.size());
  return x_blocks.empty() ? 0 : out;
}

std::uint32_t LowerBoundInstance::forced_distance(const ForcedSet& f) const { return 6 + 2 * d - f.j; }

namespace {

nlohmann::json edge_json(const Graph& g, EdgeId e) {
  const auto& ed = g.edge(e);
  return {std::min(ed.u, ed.v), std::max(ed.u, ed.v)};
}

}  // namespace

std::string lb_sidecar_json(const LowerBoundInstance& inst) {
  nlohmann::json j;
  j["kind"] = inst.multi_source ? "multi" : "single";
  j["n"] = inst.graph.vertex_count();
  j["m"] = inst.graph.edge_count();
  j["epsilon"] = inst.epsilon;
  j["K"] = inst.source_count;
  j["d"] = inst.d;
  j["k"] = inst.k;
  j["sources"] = inst.sources;
  j["relays"] = inst.relays;
  j["x_blocks"] = inst.x_blocks;
  j["copies"] = nlohmann::json::array();
  for (const auto& c : inst.copies)
    j["copies"].push_back({{"source", c.source}, {"pi", c.pi}, {"z", c.z}, {"ladders", c.ladders}, {"block", c.block}});
  j["forced"] = nlohmann::json::array();
  for (const auto& f : inst.forced)
    j["forced"].push_back({{"pi_edge", edge_json(inst.graph, f.pi_edge)},
                           {"copy", f.copy},
                           {"j", f.j},
                           {"z", f.z},
                           {"source", inst.copies[f.copy].source},
                           {"fan_size", inst.x_blocks[inst.copies[f.copy].block].size()}});
  return j.dump() + "\n";
}

LowerBoundInstance lb_from_sidecar(Graph graph, const std::string& sidecar) {
  LowerBoundInstance inst;
  try {
    const auto j = nlohmann::json::parse(sidecar);
    if (j.at("n").get<std::size_t>() != graph.vertex_count() || j.at("m").get<std::size_t>() != graph.edge_count())
      throw std::invalid_argument("sidecar: n/m do not match the graph");
    inst.multi_source = j.at("kind").get<std::string>() == "multi";
    inst.epsilon = j.at("epsilon").get<double>();
    inst.source_count = j.at("K").get<std::size_t>();
    inst.d = j.at("d").get<std::uint32_t>();
    inst.k = j.at("k").get<std::uint32_t>();
    inst.sources = j.at("sources").get<std::vector<Vertex>>();
    inst.relays = j.at("relays").get<std::vector<Vertex>>();
    inst.x_blocks = j.at("x_blocks").get<std::vector<std::vector<Vertex>>>();
    for (const auto& c : j.at("copies")) {
      LbCopy copy;
      copy.source = c.at("source").get<Vertex>();
      copy.pi = c.at("pi").get<std::vector<Vertex>>();
      copy.z = c.at("z").get<std::vector<Vertex>>();
      copy.ladders = c.at("ladders").get<std::vector<std::vector<Vertex>>>();
      copy.block = c.at("block").get<std::size_t>();
      if (copy.block >= inst.x_blocks.size()) throw std::invalid_argument("sidecar: block index out of range");
      inst.copies.push_back(std::move(copy));
    }
    for (const auto& f : j.at("forced")) {
      const auto ends = f.at("pi_edge").get<std::vector<Vertex>>();
      if (ends.size() != 2 || ends[0] >= graph.vertex_count() || ends[1] >= graph.vertex_count())
        throw std::invalid_argument("sidecar: bad pi edge");
      const auto e = graph.find_edge(ends[0], ends[1]);
      if (!e) throw std::invalid_argument("sidecar: pi edge not in graph");
      const auto copy = f.at("copy").get<std::size_t>();
      if (copy >= inst.copies.size()) throw std::invalid_argument("sidecar: copy index out of range");
      inst.forced.push_back({*e, copy, f.at("j").get<std::uint32_t>(), f.at("z").get<Vertex>()});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("sidecar: ") + ex.what());
  }
  inst.graph = std::move(graph);
  return inst;
}

AuditReport audit_lb(const LowerBoundInstance& inst, std::span<const EdgeId> h, std::span<const EdgeId> reinforced,
                     unsigned threads) {
  VerifyOptions opts;
  opts.threads = threads;
  const auto report = verify_structure(inst.graph, inst.sources, h, reinforced, opts);
  if (!report.ok)
    throw std::invalid_argument("audit: structure does not verify (" + std::to_string(report.violations.size()) +
                                " violations)");
  AuditReport out;
  out.verified = true;
  std::vector<EdgeId> h_ids(h.begin(), h.end()), r_ids(reinforced.begin(), reinforced.end());
  std::sort(h_ids.begin(), h_ids.end());
  std::sort(r_ids.begin(), r_ids.end());
  h_ids.erase(std::unique(h_ids.begin(), h_ids.end()), h_ids.end());
  r_ids.erase(std::unique(r_ids.begin(), r_ids.end()), r_ids.end());
  out.backup = h_ids.size() - r_ids.size();
  out.pi_edges = inst.forced.size();

  for (const auto& f : inst.forced) {
    if (std::binary_search(r_ids.begin(), r_ids.end(), f.pi_edge)) continue;
    ++out.pi_unreinforced;
    const auto fan = inst.forced_edges(f);
    out.floor += fan.size();
    for (const auto e : fan)
      if (!std::binary_search(h_ids.begin(), h_ids.end(), e)) out.missing.push_back({f.pi_edge, e});
  }

  const auto n = static_cast<double>(inst.graph.vertex_count());
  out.budget = static_cast<std::size_t>(std::floor(
      snapped_pow(static_cast<double>(inst.source_count), inst.epsilon) * snapped_pow(n, 1.0 - inst.epsilon) / 6.0));
  out.budget_floor = out.pi_edges > out.budget ? (out.pi_edges - out.budget) * inst.min_block_size() : 0;
  out.ok = out.missing.empty() && out.backup >= out.floor;
  return out;
}

std::string audit_to_json(const LowerBoundInstance& inst, const AuditReport& report) {
  nlohmann::json j;
  j["ok"] = report.ok;
  j["verified"] = report.verified;
  j["pi_edges"] = report.pi_edges;
  j["pi_unreinforced"] = report.pi_unreinforced;
  j["floor"] = report.floor;
  j["backup"] = report.backup;
  j["budget"] = report.budget;
  j["budget_floor"] = report.budget_floor;
  j["missing"] = nlohmann::json::array();
  for (const auto& m : report.missing)
    j["missing"].push_back({{"pi_edge", edge_json(inst.graph, m.pi_edge)}, {"edge", edge_json(inst.graph, m.missing)}});
  return j.dump() + "\n";
}

}  // namespace ftbfs
