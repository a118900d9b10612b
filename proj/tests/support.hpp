#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ftbfs/graph.hpp"

namespace testing_support {

using ftbfs::Edge;
using ftbfs::EdgeId;
using ftbfs::Graph;
using ftbfs::Vertex;

inline constexpr std::uint32_t kInf = ftbfs::kUnreachable;

// s=0, a=1, b=2; e0=(s,a), e1=(a,b), e2=(s,b)
inline Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({v - 1, v});
  return Graph(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({v - 1, v});
  edges.push_back({static_cast<Vertex>(n - 1), 0});
  return Graph(n, edges);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, edges);
}

inline Graph star_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({0, v});
  return Graph(n, edges);
}

// heap numbering: children of v are 2v+1 and 2v+2
inline Graph complete_binary_tree(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({(v - 1) / 2, v});
  return Graph(n, edges);
}

inline Graph random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<Vertex> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin() + 1, label.end(), rng);
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    // mix of deep and bushy shapes
    std::uniform_int_distribution<std::size_t> pick(i > 8 && rng() % 3 == 0 ? i - 8 : 0, i - 1);
    edges.push_back({label[pick(rng)], label[i]});
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return Graph(n, edges);
}

// Connected graph: a random spanning tree plus `extra` random non-tree edges,
// with edge ids shuffled.
inline Graph random_connected(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
  const auto tree = random_tree(n, rng);
  std::vector<Edge> edges(tree.edges().begin(), tree.edges().end());
  std::set<std::pair<Vertex, Vertex>> seen;
  for (const auto& e : edges) seen.insert(std::minmax(e.u, e.v));
  const std::size_t max_edges = n * (n - 1) / 2;
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
  while (edges.size() < std::min(max_edges, n - 1 + extra)) {
    const auto u = pick(rng), v = pick(rng);
    if (u == v || !seen.insert(std::minmax(u, v)).second) continue;
    edges.push_back({u, v});
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return Graph(n, edges);
}

// Plain BFS over the edges not excluded, independent of the library's views.
inline std::vector<std::uint32_t> oracle_bfs(const Graph& g, Vertex s, const std::vector<bool>& edge_on) {
  std::vector<std::vector<Vertex>> adj(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!edge_on[e]) continue;
    adj[g.edge(e).u].push_back(g.edge(e).v);
    adj[g.edge(e).v].push_back(g.edge(e).u);
  }
  std::vector<std::uint32_t> dist(g.vertex_count(), kInf);
  std::queue<Vertex> q;
  dist[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (const auto w : adj[u])
      if (dist[w] == kInf) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
  }
  return dist;
}

struct CorpusGraph {
  std::uint64_t seed;
  std::string density;
  Graph graph;
};

// Seeded corpus graph: n in [16, 200], density class cycling through
// tree+, sparse, medium and dense.
inline CorpusGraph corpus_graph(std::uint64_t seed) {
  std::mt19937_64 rng(0x5eed0000ULL + seed);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(16, 200)(rng);
  static const char* const names[] = {"tree+", "sparse", "medium", "dense"};
  const auto cls = seed % 4;
  std::size_t extra = 0;
  switch (cls) {
    case 0: extra = n / 8 + 1; break;
    case 1: extra = n; break;
    case 2: extra = 4 * n; break;
    default: extra = std::min<std::size_t>(n * (n - 1) / 4, 6000); break;
  }
  return {seed, names[cls], random_connected(n, extra, rng)};
}

// Acceptance and calibration corpora use disjoint seed ranges.
inline constexpr std::uint64_t kAcceptanceSeedBase = 0;
inline constexpr std::uint64_t kCalibrationSeedBase = 100000;

inline std::vector<bool> all_edges(const Graph& g) { return std::vector<bool>(g.edge_count(), true); }

inline std::vector<bool> without_edge(const Graph& g, EdgeId e) {
  auto on = all_edges(g);
  on[e] = false;
  return on;
}

inline std::vector<bool> only_edges(const Graph& g, const std::vector<EdgeId>& ids) {
  std::vector<bool> on(g.edge_count(), false);
  for (const auto e : ids) on[e] = true;
  return on;
}

}  // namespace testing_support
