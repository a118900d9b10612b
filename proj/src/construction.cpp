#include "ftbfs/construction.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "parallel.hpp"

namespace ftbfs {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0,1]");
}

// Pairs of one sorted PairSet grouped by target.
template <typename Fn>
void for_each_target(const ReplacementTable& table, std::span<const PairIndex> pairs, Fn&& fn) {
  std::size_t i = 0;
  while (i < pairs.size()) {
    const auto v = table.at(pairs[i]).target;
    auto j = i;
    while (j < pairs.size() && table.at(pairs[j]).target == v) ++j;
    fn(v, pairs.subspan(i, j - i));
    i = j;
  }
}

}  // namespace

std::uint32_t k_eps(double epsilon) {
  check_epsilon(epsilon);
  return static_cast<std::uint32_t>(std::ceil(1.0 / epsilon - 1e-12)) + 2;
}

std::uint64_t ceil_n_pow_eps(std::size_t n, double epsilon) {
  if (n == 0) return 0;
  const double x = std::exp(epsilon * std::log(static_cast<double>(n)));
  const double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-9) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(x));
}

bool EdgeSet::insert(EdgeId e) {
  auto& slot = in_.at(e);
  if (slot) return false;
  slot = 1;
  ++size_;
  return true;
}

void EdgeSet::erase(EdgeId e) {
  auto& slot = in_.at(e);
  if (!slot) return;
  slot = 0;
  --size_;
}

std::vector<EdgeId> EdgeSet::sorted() const {
  std::vector<EdgeId> out;
  out.reserve(size_);
  for (EdgeId e = 0; e < in_.size(); ++e)
    if (in_[e]) out.push_back(e);
  return out;
}

SplitResult split_up(const BfsTree& tree, const ReplacementTable& table) {
  const auto& up = table.uncovered();
  const InterferenceIndex index(tree, table, up);
  std::vector<PairIndex> i1, i2;
  for (const auto p : up) (index.nsim_partners(p).empty() ? i2 : i1).push_back(p);
  return {make_pair_set("I1", std::move(i1)), make_pair_set("I2", std::move(i2))};
}

PhaseS1Result phase_s1(const Graph& g, const BfsTree& tree, const ReplacementTable& table, const PairSet& i1,
                       double epsilon, EdgeSet& h, const PhaseS1Options& options) {
  const auto k = k_eps(epsilon);
  const auto cap = ceil_n_pow_eps(g.vertex_count(), epsilon);
  PhaseS1Result out;
  auto pending = i1.pairs;

  for (std::uint32_t i = 1; i <= k; ++i) {
    const auto current = make_pair_set("P" + std::to_string(i), pending);
    if (current.empty()) {
      out.banked.push_back(make_pair_set("P^C" + std::to_string(i), {}));
      continue;
    }
    out.iterations = i;
    const auto types = classify_types(tree, table, current);
    out.census.push_back({i, types.a.size(), types.b.size(), types.c.size()});

    for (const auto* part : {&types.a, &types.b}) {
      for_each_target(table, part->pairs, [&](Vertex, std::span<const PairIndex> group) {
        std::unordered_set<EdgeId> distinct;
        for (const auto p : detour_order(tree, table, group)) {
          const auto last = table.at(p).last_edge();
          const bool fresh = h.insert(last);
          if (fresh) ++out.added;
          if (!options.distinct_against_h || fresh) distinct.insert(last);
          if (distinct.size() >= cap) break;
        }
      });
    }

    pending.clear();
    for (const auto* part : {&types.a, &types.b})
      for (const auto p : part->pairs)
        if (!h.contains(table.at(p).last_edge())) pending.push_back(p);
    auto banked = types.c;
    banked.label = "P^C" + std::to_string(i);
    out.banked.push_back(std::move(banked));
  }

  out.leftover = pending.size();
  for (const auto p : pending)
    if (h.insert(table.at(p).last_edge())) ++out.added;
  return out;
}

PhaseS2Result phase_s2(const Graph& g, const BfsTree& tree, const TreeDecomposition& td, const ReplacementTable& table,
                       const std::vector<PairSet>& sets, double epsilon, EdgeSet& h) {
  const auto cap = ceil_n_pow_eps(g.vertex_count(), epsilon);
  PhaseS2Result out;

  // S2.1
  for (const auto p : table.uncovered()) {
    const auto& rp = table.at(p);
    if (td.is_glue(rp.failing_edge) && h.insert(rp.last_edge())) ++out.glue_added;
  }
  out.added = out.glue_added;

  for (const auto& set : sets) {
    for_each_target(table, set.pairs, [&](Vertex v, std::span<const PairIndex> group) {
      const auto seg = segment_decompose(tree.depth(v));
      // pairs keyed by the position of their failing edge on pi(s, v)
      std::map<std::uint32_t, PairIndex> by_position;
      for (const auto p : group) by_position.emplace(tree.depth(tree.upper(table.at(p).failing_edge)), p);

      std::set<PairIndex> add;
      auto in_range = [&](EdgeRange r) {
        return std::make_pair(by_position.lower_bound(r.begin), by_position.lower_bound(r.end));
      };
      auto distinct_last = [&](EdgeRange r) {
        std::unordered_set<EdgeId> last;
        for (auto [it, end] = in_range(r); it != end; ++it) last.insert(table.at(it->second).last_edge());
        return last.size();
      };
      auto add_range = [&](EdgeRange r) {
        for (auto [it, end] = in_range(r); it != end; ++it) add.insert(it->second);
      };
      auto add_upmost = [&](EdgeRange r) {
        const auto [it, end] = in_range(r);
        if (it != end) add.insert(it->second);
      };
      auto intersect = [](EdgeRange a, EdgeRange b) {
        return EdgeRange{std::max(a.begin, b.begin), std::min(a.end, b.end)};
      };

      // S2.2
      for (std::size_t j = 0; j < seg.segment_count(); ++j) {
        const auto range = seg.segment(j);
        if (distinct_last(range) < cap) add_range(range);
        add_upmost(range);
      }

      // S2.3
      for (const auto psi : tree_path_intersections(td, tree, v).paths) {
        const auto shared = shared_edges(td, tree, psi, v);
        if (shared.empty()) continue;
        add_upmost(shared);
        const auto ul = upper_lower_intersect(seg, shared);
        for (const auto& side : {ul.upper, ul.lower}) {
          if (!side) continue;
          const auto range = intersect(seg.segment(*side), shared);
          if (distinct_last(range) <= cap) add_range(range);
          add_upmost(range);
        }
      }

      std::unordered_set<EdgeId> selected;
      for (const auto p : add) {
        const auto last = table.at(p).last_edge();
        selected.insert(last);
        if (h.insert(last)) ++out.added;
      }
      out.max_selection = std::max(out.max_selection, selected.size());
    });
  }
  return out;
}

std::vector<EdgeId> compute_unprotected(const Graph& g, const BfsTree& tree, const EdgeSet& h, unsigned threads) {
  const auto& tree_edges = tree.edges();
  std::vector<std::uint8_t> unprotected(tree_edges.size(), 0);
  detail::parallel_for(tree_edges.size(), threads, [&](std::size_t idx) {
    const auto e = tree_edges[idx];
    GraphView without(g);
    without.remove_edge(e);
    const auto dist = bfs_distances(without, tree.source());
    std::vector<Vertex> stack{tree.lower(e)};
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      if (dist[v] != kUnreachable) {
        const bool protected_v = std::any_of(g.neighbors(v).begin(), g.neighbors(v).end(), [&](const Incidence& inc) {
          return inc.edge != e && h.contains(inc.edge) && dist[inc.to] != kUnreachable && dist[inc.to] + 1 == dist[v];
        });
        if (!protected_v) {
          unprotected[idx] = 1;
          return;
        }
      }
      for (const auto c : tree.children(v)) stack.push_back(c);
    }
  });
  std::vector<EdgeId> out;
  for (std::size_t idx = 0; idx < tree_edges.size(); ++idx)
    if (unprotected[idx]) out.push_back(tree_edges[idx]);
  return out;
}

std::vector<EdgeId> FtBfsStructure::edges() const {
  std::vector<EdgeId> out;
  std::merge(backup.begin(), backup.end(), reinforced.begin(), reinforced.end(), std::back_inserter(out));
  return out;
}

EdgeSet baseline_ftbfs(const Graph& g, const BfsTree& tree, const ReplacementTable& table) {
  EdgeSet h(g.edge_count());
  for (const auto e : tree.edges()) h.insert(e);
  for (const auto p : table.uncovered()) h.insert(table.at(p).last_edge());
  return h;
}

namespace {

void check_source(const Graph& g, Vertex source) {
  if (source >= g.vertex_count()) throw std::invalid_argument("source vertex out of range");
}

FtBfsStructure finish(const Graph& g, const BfsTree& tree, Vertex source, double epsilon, EdgeSet h,
                      BuildStats stats, unsigned threads) {
  FtBfsStructure out;
  out.source = source;
  out.epsilon = epsilon;
  out.n = g.vertex_count();
  out.m = g.edge_count();
  out.reinforced = compute_unprotected(g, tree, h, threads);
  for (const auto e : out.reinforced) h.erase(e);
  out.backup = h.sorted();
  stats.b = out.backup.size();
  stats.r = out.reinforced.size();
  out.stats = std::move(stats);
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

FtBfsStructure build_baseline(const Graph& g, Vertex source, double epsilon, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  BuildStats stats;
  stats.k_eps = k_eps(epsilon);
  check_source(g, source);
  const BfsTree tree(g, source);
  const auto table = pcons_all(g, tree, threads);
  stats.uncovered_pairs = table.uncovered().size();
  stats.route = "baseline";
  auto h = baseline_ftbfs(g, tree, table);
  auto out = finish(g, tree, source, epsilon, std::move(h), std::move(stats), threads);
  out.stats.wall_ms = elapsed_ms(start);
  return out;
}

FtBfsStructure build_eps_ftbfs(const Graph& g, Vertex source, double epsilon, const BuildOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  BuildStats stats;
  stats.k_eps = k_eps(epsilon);
  check_source(g, source);
  if (epsilon >= 0.5 && !options.force_eps_machinery) return build_baseline(g, source, epsilon, options.threads);

  const BfsTree tree(g, source);
  const auto table = pcons_all(g, tree, options.threads);
  stats.uncovered_pairs = table.uncovered().size();
  EdgeSet h(g.edge_count());
  for (const auto e : tree.edges()) h.insert(e);

  if (table.uncovered().empty() || g.vertex_count() <= 2) {
    stats.route = "degenerate";
  } else {
    stats.route = "eps";
    auto split = split_up(tree, table);
    const auto s1 = phase_s1(g, tree, table, split.i1, epsilon, h, {options.s1_distinct_against_h});
    stats.phase_s1_added = s1.added;
    stats.s1_iterations = s1.iterations;
    stats.s1_leftover = s1.leftover;

    std::vector<PairSet> sets;
    sets.push_back(std::move(split.i2));
    sets.insert(sets.end(), s1.banked.begin(), s1.banked.end());
    const auto td = heavy_path_decompose(tree);
    const auto s2 = phase_s2(g, tree, td, table, sets, epsilon, h);
    stats.phase_s2_added = s2.added;
    stats.glue_added = s2.glue_added;
    stats.max_selection = s2.max_selection;
  }
  auto out = finish(g, tree, source, epsilon, std::move(h), std::move(stats), options.threads);
  out.stats.wall_ms = elapsed_ms(start);
  return out;
}

namespace {

nlohmann::json edge_list(const Graph& g, const std::vector<EdgeId>& ids) {
  std::vector<std::array<Vertex, 2>> pairs;
  pairs.reserve(ids.size());
  for (const auto e : ids) {
    const auto& ed = g.edge(e);
    pairs.push_back({std::min(ed.u, ed.v), std::max(ed.u, ed.v)});
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<EdgeId> edge_ids(const Graph& g, const nlohmann::json& list, const char* key) {
  if (!list.is_array()) throw std::invalid_argument(std::string("structure: '") + key + "' must be an array");
  std::vector<EdgeId> out;
  for (const auto& item : list) {
    if (!item.is_array() || item.size() != 2) throw std::invalid_argument(std::string("structure: bad edge in ") + key);
    const auto u = item[0].get<std::int64_t>();
    const auto v = item[1].get<std::int64_t>();
    if (u < 0 || v < 0 || u >= static_cast<std::int64_t>(g.vertex_count()) ||
        v >= static_cast<std::int64_t>(g.vertex_count()))
      throw std::invalid_argument(std::string("structure: vertex out of range in ") + key);
    const auto e = g.find_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
    if (!e)
      throw std::invalid_argument("structure: edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") is not in the graph");
    out.push_back(*e);
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw std::invalid_argument(std::string("structure: duplicate edge in ") + key);
  return out;
}

}  // namespace

std::string structure_to_json(const Graph& g, const FtBfsStructure& s, bool with_timing) {
  nlohmann::json j;
  j["n"] = s.n;
  j["m"] = s.m;
  j["source"] = s.source;
  j["epsilon"] = s.epsilon;
  j["backup_edges"] = edge_list(g, s.backup);
  j["reinforced_edges"] = edge_list(g, s.reinforced);
  j["stats"] = {{"b", s.stats.b},
                {"r", s.stats.r},
                {"k_eps", s.stats.k_eps},
                {"phase_s1_added", s.stats.phase_s1_added},
                {"phase_s2_added", s.stats.phase_s2_added},
                {"wall_ms", with_timing ? s.stats.wall_ms : 0.0}};
  return j.dump() + "\n";
}

FtBfsStructure structure_from_json(const Graph& g, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("structure: ") + ex.what());
  }
  try {
    FtBfsStructure s;
    s.n = j.at("n").get<std::size_t>();
    s.m = j.at("m").get<std::size_t>();
    if (s.n != g.vertex_count() || s.m != g.edge_count())
      throw std::invalid_argument("structure: n/m do not match the graph (" + std::to_string(s.n) + "/" +
                                  std::to_string(s.m) + " vs " + std::to_string(g.vertex_count()) + "/" +
                                  std::to_string(g.edge_count()) + ")");
    s.source = j.at("source").get<Vertex>();
    if (s.source >= g.vertex_count()) throw std::invalid_argument("structure: source out of range");
    s.epsilon = j.at("epsilon").get<double>();
    s.backup = edge_ids(g, j.at("backup_edges"), "backup_edges");
    s.reinforced = edge_ids(g, j.at("reinforced_edges"), "reinforced_edges");
    std::vector<EdgeId> both;
    std::set_intersection(s.backup.begin(), s.backup.end(), s.reinforced.begin(), s.reinforced.end(),
                          std::back_inserter(both));
    if (!both.empty()) throw std::invalid_argument("structure: an edge is both backup and reinforced");
    if (j.contains("stats")) {
      const auto& st = j["stats"];
      s.stats.k_eps = st.value("k_eps", 0u);
      s.stats.phase_s1_added = st.value("phase_s1_added", std::size_t{0});
      s.stats.phase_s2_added = st.value("phase_s2_added", std::size_t{0});
      s.stats.wall_ms = st.value("wall_ms", 0.0);
    }
    s.stats.b = s.backup.size();
    s.stats.r = s.reinforced.size();
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("structure: ") + ex.what());
  }
}

}  // namespace ftbfs
