#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ftbfs/construction.hpp"
#include "ftbfs/decomposition.hpp"
#include "ftbfs/verify.hpp"
#include "support.hpp"

using namespace ftbfs;
using namespace testing_support;

namespace {

std::vector<Vertex> sources_of(Vertex s) { return {s}; }

bool verifies(const Graph& g, const FtBfsStructure& s) {
  const auto src = sources_of(s.source);
  return verify_structure(g, src, s.edges(), s.reinforced).ok;
}

std::uint32_t ceil_log2(std::size_t n) {
  std::uint32_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

}  // namespace

TEST(Parameters, KEps) {
  EXPECT_EQ(k_eps(1.0), 3u);
  EXPECT_EQ(k_eps(0.5), 4u);
  EXPECT_EQ(k_eps(0.3), 6u);
  EXPECT_EQ(k_eps(0.25), 6u);
  EXPECT_EQ(k_eps(0.2), 7u);
  EXPECT_THROW(k_eps(0.0), std::invalid_argument);
  EXPECT_THROW(k_eps(1.5), std::invalid_argument);
  EXPECT_THROW(k_eps(-0.1), std::invalid_argument);
  try {
    k_eps(1.5);
  } catch (const std::invalid_argument& err) {
    EXPECT_STREQ(err.what(), "epsilon must lie in (0,1]");
  }
}

TEST(Parameters, CeilPower) {
  EXPECT_EQ(ceil_n_pow_eps(1024, 0.2), 4u);
  EXPECT_EQ(ceil_n_pow_eps(8, 1.0 / 3.0), 2u);
  EXPECT_EQ(ceil_n_pow_eps(100, 0.5), 10u);
  EXPECT_EQ(ceil_n_pow_eps(101, 0.5), 11u);
  EXPECT_EQ(ceil_n_pow_eps(1, 0.7), 1u);
}

TEST(EdgeSetTest, InsertEraseSorted) {
  EdgeSet h(6);
  EXPECT_TRUE(h.insert(4));
  EXPECT_FALSE(h.insert(4));
  EXPECT_TRUE(h.insert(1));
  EXPECT_EQ(h.size(), 2u);
  EXPECT_EQ(h.sorted(), (std::vector<EdgeId>{1, 4}));
  h.erase(4);
  h.erase(4);
  EXPECT_EQ(h.size(), 1u);
  EXPECT_FALSE(h.contains(4));
}

TEST(Split, EmptyUp) {
  const auto g = path_graph(5);
  const BfsTree t(g, 0);
  const auto split = split_up(t, pcons_all(g, t));
  EXPECT_TRUE(split.i1.empty());
  EXPECT_TRUE(split.i2.empty());
}

TEST(PhaseS1, EmptyInput) {
  const auto g = triangle();
  const BfsTree t(g, 0);
  const auto table = pcons_all(g, t);
  EdgeSet h(g.edge_count());
  const auto r = phase_s1(g, t, table, make_pair_set("I1", {}), 0.3, h);
  EXPECT_EQ(r.added, 0u);
  EXPECT_EQ(r.iterations, 0u);
  ASSERT_EQ(r.banked.size(), k_eps(0.3));
  for (const auto& c : r.banked) EXPECT_TRUE(c.empty());
  EXPECT_EQ(h.size(), 0u);
}

TEST(PhaseS1, ExhaustedInFirstIteration) {
  // relay graph: two crossing pairs, one distinct last edge per target
  const Graph g(8, {{0, 5}, {5, 6}, {6, 7}, {0, 1}, {1, 2}, {0, 3}, {3, 4}, {7, 2}, {7, 4}});
  const BfsTree t(g, 0);
  const auto table = pcons_all(g, t);
  const auto split = split_up(t, table);
  ASSERT_FALSE(split.i1.empty());
  EdgeSet h(g.edge_count());
  const auto r = phase_s1(g, t, table, split.i1, 0.5, h);
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_EQ(r.leftover, 0u);
  for (const auto p : split.i1.pairs) EXPECT_TRUE(h.contains(table.at(p).last_edge()) || r.banked[0].contains(p));
  for (std::size_t i = 1; i < r.banked.size(); ++i) EXPECT_TRUE(r.banked[i].empty());
}

TEST(PhaseS1, BankedSetsAreSimSets) {
  std::mt19937_64 rng(51);
  std::size_t nonempty = 0;
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 20 + rng() % 80;
    const auto g = random_connected(n, n + rng() % (3 * n), rng);
    const BfsTree t(g, 0);
    const auto table = pcons_all(g, t);
    const auto split = split_up(t, table);
    for (const double eps : {0.2, 0.34}) {
      for (const bool against_h : {false, true}) {
        EdgeSet h(g.edge_count());
        const auto r = phase_s1(g, t, table, split.i1, eps, h, {against_h});
        ASSERT_EQ(r.banked.size(), k_eps(eps));
        std::vector<PairIndex> seen;
        for (const auto& c : r.banked) {
          EXPECT_TRUE(is_sim_set(t, table, c)) << c.label;
          nonempty += c.empty() ? 0 : 1;
          seen.insert(seen.end(), c.pairs.begin(), c.pairs.end());
        }
        std::sort(seen.begin(), seen.end());
        EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end()) << "pair banked twice";
        for (const auto p : split.i1.pairs) {
          // every I1 pair ends up banked or has its last edge in H
          EXPECT_TRUE(std::binary_search(seen.begin(), seen.end(), p) || h.contains(table.at(p).last_edge()));
        }
        for (const auto& c : r.census) EXPECT_GT(c.a + c.b + c.c, 0u);
      }
    }
  }
  EXPECT_GT(nonempty, 0u);
}

TEST(PhaseS2, OnlyGlueWhenSetsAreEmpty) {
  std::mt19937_64 rng(52);
  const auto g = random_connected(60, 90, rng);
  const BfsTree t(g, 0);
  const auto table = pcons_all(g, t);
  const auto td = heavy_path_decompose(t);
  EdgeSet h(g.edge_count());
  const auto r = phase_s2(g, t, td, table, {make_pair_set("E", {})}, 0.3, h);
  EXPECT_EQ(r.added, r.glue_added);
  EXPECT_EQ(r.max_selection, 0u);
  for (const auto e : h.sorted()) {
    bool from_glue = false;
    for (const auto p : table.uncovered())
      from_glue = from_glue || (table.at(p).last_edge() == e && td.is_glue(table.at(p).failing_edge));
    EXPECT_TRUE(from_glue);
  }
}

TEST(PhaseS2, TriangleAddsSharedLastEdge) {
  const auto g = triangle();
  const BfsTree t(g, 0);
  const auto table = pcons_all(g, t);
  const auto td = heavy_path_decompose(t);
  const auto split = split_up(t, table);
  EdgeSet h(g.edge_count());
  for (const auto e : t.edges()) h.insert(e);
  phase_s2(g, t, td, table, {split.i2}, 0.3, h);
  EXPECT_EQ(h.sorted(), (std::vector<EdgeId>{0, 1, 2}));
}

TEST(PhaseS2, SelectionCensusBound) {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 30 + rng() % 150;
    const auto g = random_connected(n, n + rng() % (4 * n), rng);
    const BfsTree t(g, 0);
    const auto table = pcons_all(g, t);
    const auto td = heavy_path_decompose(t);
    for (const double eps : {0.2, 0.34}) {
      EdgeSet h(g.edge_count());
      const auto r = phase_s2(g, t, td, table, {make_pair_set("U", table.uncovered())}, eps, h);
      EXPECT_LE(r.max_selection, 6 * ceil_n_pow_eps(n, eps) * (ceil_log2(n) + 1));
    }
  }
}

TEST(Unprotected, Examples) {
  const auto g = triangle();
  const BfsTree t(g, 0);
  EdgeSet all(3);
  for (EdgeId e = 0; e < 3; ++e) all.insert(e);
  EXPECT_TRUE(compute_unprotected(g, t, all).empty());
  EdgeSet tree_only(3);
  tree_only.insert(0);
  tree_only.insert(2);
  EXPECT_EQ(compute_unprotected(g, t, tree_only), (std::vector<EdgeId>{0, 2}));

  const auto tree_graph = complete_binary_tree(15);
  const BfsTree tt(tree_graph, 0);
  EdgeSet t0(tree_graph.edge_count());
  for (const auto e : tt.edges()) t0.insert(e);
  EXPECT_TRUE(compute_unprotected(tree_graph, tt, t0).empty());
}

TEST(Unprotected, ContainsTheTrulyUnprotectedEdges) {
  std::mt19937_64 rng(54);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 10 + rng() % 60;
    const auto g = random_connected(n, rng() % (3 * n), rng);
    const BfsTree t(g, 0);
    EdgeSet h(g.edge_count());
    for (const auto e : t.edges()) h.insert(e);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (rng() % 2 == 0) h.insert(e);
    const auto mine = compute_unprotected(g, t, h, 2);
    const auto truth = minimal_reinforcement_oracle(g, 0, h.sorted());
    EXPECT_TRUE(std::includes(mine.begin(), mine.end(), truth.begin(), truth.end()));
    const auto src = sources_of(0);
    EXPECT_TRUE(verify_structure(g, src, h.sorted(), mine).ok);
  }
}

TEST(Baseline, Examples) {
  const auto tri = triangle();
  const BfsTree t(tri, 0);
  EXPECT_EQ(baseline_ftbfs(tri, t, pcons_all(tri, t)).size(), 3u);

  const auto tree_graph = complete_binary_tree(10);
  const BfsTree tt(tree_graph, 0);
  EXPECT_EQ(baseline_ftbfs(tree_graph, tt, pcons_all(tree_graph, tt)).sorted(), tt.edges());

  const auto k4 = complete_graph(4);
  for (Vertex s = 0; s < 4; ++s) {
    const BfsTree tk(k4, s);
    const auto table = pcons_all(k4, tk);
    const auto h = baseline_ftbfs(k4, tk, table);
    EXPECT_LE(static_cast<double>(h.size()), std::pow(4.0, 1.5) + 4);
    EXPECT_TRUE(compute_unprotected(k4, tk, h).empty());
  }
}

TEST(Build, TriangleAtHalf) {
  const auto g = triangle();
  const auto s = build_eps_ftbfs(g, 0, 0.5);
  EXPECT_EQ(s.backup, (std::vector<EdgeId>{0, 1, 2}));
  EXPECT_TRUE(s.reinforced.empty());
  EXPECT_EQ(s.stats.route, "baseline");
  EXPECT_EQ(s.stats.b, 3u);
  EXPECT_EQ(s.stats.r, 0u);
}

TEST(Build, TreeInput) {
  const auto g = complete_binary_tree(20);
  for (const double eps : {0.2, 0.5, 1.0}) {
    const auto s = build_eps_ftbfs(g, 0, eps);
    EXPECT_EQ(s.backup.size(), g.edge_count());
    EXPECT_TRUE(s.reinforced.empty());
  }
}

TEST(Build, RejectsBadArguments) {
  const auto g = triangle();
  EXPECT_THROW(build_eps_ftbfs(g, 0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_eps_ftbfs(g, 0, 1.01), std::invalid_argument);
  EXPECT_THROW(build_eps_ftbfs(g, 9, 0.3), std::invalid_argument);
}

TEST(Build, AlwaysVerifies) {
  std::mt19937_64 rng(55);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 5 + rng() % 120;
    const auto g = random_connected(n, rng() % (4 * n), rng);
    const Vertex src = static_cast<Vertex>(rng() % n);
    for (const double eps : {0.2, 0.34, 0.5, 1.0}) {
      const auto s = build_eps_ftbfs(g, src, eps);
      EXPECT_TRUE(verifies(g, s)) << "n=" << n << " eps=" << eps;
      EXPECT_EQ(s.stats.b + s.stats.r, s.edges().size());
      const auto h = s.edges();
      const auto t0 = BfsTree(g, src).edges();
      EXPECT_TRUE(std::includes(h.begin(), h.end(), t0.begin(), t0.end()));
    }
    const auto forced = build_eps_ftbfs(g, src, 0.7, {true, false, 1});
    EXPECT_TRUE(verifies(g, forced));
    EXPECT_NE(forced.stats.route, "baseline");
    const auto against = build_eps_ftbfs(g, src, 0.25, {false, true, 1});
    EXPECT_TRUE(verifies(g, against));
  }
}

TEST(Build, DisconnectedInput) {
  const Graph g(7, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  const auto s = build_eps_ftbfs(g, 0, 0.3);
  EXPECT_TRUE(verifies(g, s));
}

TEST(Build, ThreadCountDoesNotChangeOutput) {
  std::mt19937_64 rng(56);
  const auto g = random_connected(150, 450, rng);
  const auto one = build_eps_ftbfs(g, 0, 0.25, {false, false, 1});
  const auto four = build_eps_ftbfs(g, 0, 0.25, {false, false, 4});
  EXPECT_EQ(structure_to_json(g, one), structure_to_json(g, four));
}

TEST(StructureJson, RoundTripAndFormat) {
  const auto g = triangle();
  const auto s = build_eps_ftbfs(g, 0, 0.5);
  const auto text = structure_to_json(g, s);
  EXPECT_EQ(text,
            R"({"backup_edges":[[0,1],[0,2],[1,2]],"epsilon":0.5,"m":3,"n":3,"reinforced_edges":[],"source":0,)"
            R"("stats":{"b":3,"k_eps":4,"phase_s1_added":0,"phase_s2_added":0,"r":0,"wall_ms":0.0}})"
            "\n");
  const auto back = structure_from_json(g, text);
  EXPECT_EQ(back.backup, s.backup);
  EXPECT_EQ(back.reinforced, s.reinforced);
  EXPECT_EQ(back.source, 0u);
  EXPECT_DOUBLE_EQ(back.epsilon, 0.5);
}

TEST(StructureJson, Errors) {
  const auto g = triangle();
  EXPECT_THROW(structure_from_json(g, "not json"), std::invalid_argument);
  EXPECT_THROW(structure_from_json(g, R"({"n":4,"m":3,"source":0,"epsilon":0.5,"backup_edges":[],"reinforced_edges":[]})"),
               std::invalid_argument);
  EXPECT_THROW(
      structure_from_json(g, R"({"n":3,"m":3,"source":0,"epsilon":0.5,"backup_edges":[[0,9]],"reinforced_edges":[]})"),
      std::invalid_argument);
  EXPECT_THROW(structure_from_json(
                   g, R"({"n":3,"m":3,"source":0,"epsilon":0.5,"backup_edges":[[0,1]],"reinforced_edges":[[1,0]]})"),
               std::invalid_argument);
  EXPECT_THROW(structure_from_json(
                   g, R"({"n":3,"m":3,"source":0,"epsilon":0.5,"backup_edges":[[0,1],[1,0]],"reinforced_edges":[]})"),
               std::invalid_argument);
}
