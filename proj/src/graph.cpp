#include "ftbfs/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace ftbfs {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::uint64_t edge_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges) : edges_(std::move(edges)) {
  if (vertex_count >= kNoVertex) throw std::invalid_argument("vertex count too large");
  if (edges_.size() >= kNoEdge) throw std::invalid_argument("edge count too large");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size() * 2);
  std::vector<std::size_t> degree(vertex_count, 0);
  for (std::size_t id = 0; id < edges_.size(); ++id) {
    const auto [u, v] = edges_[id];
    if (u >= vertex_count || v >= vertex_count)
      throw std::invalid_argument("edge " + std::to_string(id) + " has an endpoint out of range");
    if (u == v) throw std::invalid_argument("edge " + std::to_string(id) + " is a self-loop");
    if (!seen.insert(edge_key(u, v)).second)
      throw std::invalid_argument("edge " + std::to_string(id) + " duplicates an earlier edge");
    ++degree[u];
    ++degree[v];
  }
  adjacency_offsets_.assign(vertex_count + 1, 0);
  for (std::size_t v = 0; v < vertex_count; ++v) adjacency_offsets_[v + 1] = adjacency_offsets_[v] + degree[v];
  adjacency_.resize(adjacency_offsets_.back());
  std::vector<std::size_t> fill(adjacency_offsets_.begin(), adjacency_offsets_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const auto [u, v] = edges_[id];
    adjacency_[fill[u]++] = {v, id};
    adjacency_[fill[v]++] = {u, id};
  }
}

std::span<const Incidence> Graph::neighbors(Vertex v) const {
  if (v >= vertex_count()) throw std::out_of_range("vertex out of range");
  return std::span<const Incidence>(adjacency_).subspan(adjacency_offsets_[v],
                                                         adjacency_offsets_[v + 1] - adjacency_offsets_[v]);
}

std::optional<EdgeId> Graph::find_edge(Vertex a, Vertex b) const {
  if (a >= vertex_count() || b >= vertex_count()) return std::nullopt;
  const auto small = degree(a) <= degree(b) ? a : b;
  const auto target = small == a ? b : a;
  for (const auto& inc : neighbors(small))
    if (inc.to == target) return inc.edge;
  return std::nullopt;
}

Vertex Graph::other_end(EdgeId id, Vertex from) const {
  const auto& e = edge(id);
  if (e.u == from) return e.v;
  if (e.v == from) return e.u;
  throw std::invalid_argument("vertex is not an endpoint of the edge");
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::uint64_t parse_uint(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(token) + "'");
  return value;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::size_t line_no = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> header;
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (!header) {
      if (tokens[0] != "p" || tokens.size() != 3) throw ParseError(line_no, "bad header, expected 'p <n> <m>'");
      header.emplace(parse_uint(tokens[1], line_no), parse_uint(tokens[2], line_no));
      if (header->first >= kNoVertex) throw ParseError(line_no, "vertex count too large");
      edges.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(header->second, 1u << 24)));
    } else {
      if (tokens[0] != "e" || tokens.size() != 3) throw ParseError(line_no, "expected 'e <u> <v>'");
      if (edges.size() == header->second) throw ParseError(line_no, "more edge lines than declared");
      const auto u = parse_uint(tokens[1], line_no);
      const auto v = parse_uint(tokens[2], line_no);
      if (u >= header->first || v >= header->first) throw ParseError(line_no, "vertex out of range");
      if (u == v) throw ParseError(line_no, "self-loop");
      if (!seen.insert(edge_key(static_cast<Vertex>(u), static_cast<Vertex>(v))).second)
        throw ParseError(line_no, "duplicate edge");
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    if (end == text.size()) break;
  }
  if (!header) throw ParseError(0, "missing 'p <n> <m>' header");
  if (edges.size() != header->second)
    throw ParseError(line_no, "declared " + std::to_string(header->second) + " edges, found " +
                                  std::to_string(edges.size()));
  return Graph(static_cast<std::size_t>(header->first), std::move(edges));
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::string format_graph(const Graph& g) {
  std::string out = "p " + std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (const auto& e : g.edges()) out += "e " + std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Views

GraphView::GraphView(const Graph& g)
    : graph_(&g), vertex_off_(g.vertex_count(), 0), edge_off_(g.edge_count(), 0) {}

GraphView GraphView::with_edges(const Graph& g, std::span<const EdgeId> kept) {
  GraphView view(g);
  std::fill(view.edge_off_.begin(), view.edge_off_.end(), std::uint8_t{1});
  for (const auto e : kept) view.edge_off_.at(e) = 0;
  return view;
}

bool GraphView::usable(EdgeId e) const noexcept {
  if (edge_off_[e]) return false;
  const auto& ed = graph_->edge(e);
  return vertex_off_[ed.u] == 0 && vertex_off_[ed.v] == 0;
}

// ---------------------------------------------------------------------------
// Tie-breaking weight

Perturbation Perturbation::of_edges(std::span<const EdgeId> ids) {
  Perturbation p;
  for (const auto id : ids) p.add_power_of_two(id);
  return p;
}

void Perturbation::add_power_of_two(std::uint32_t exponent) {
  for (;;) {
    // bits_ is descending: find the first element <= exponent.
    auto it = std::lower_bound(bits_.begin(), bits_.end(), exponent, std::greater<>());
    if (it != bits_.end() && *it == exponent) {
      bits_.erase(it);
      ++exponent;
      continue;
    }
    bits_.insert(it, exponent);
    return;
  }
}

std::strong_ordering Perturbation::operator<=>(const Perturbation& other) const noexcept {
  const auto n = std::min(bits_.size(), other.bits_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (bits_[i] != other.bits_[i]) return bits_[i] <=> other.bits_[i];
  return bits_.size() <=> other.bits_.size();
}

TieBreakWeight TieBreakWeight::of_path(std::span<const EdgeId> edges) {
  return {static_cast<std::uint32_t>(edges.size()), Perturbation::of_edges(edges)};
}

std::strong_ordering TieBreakWeight::operator<=>(const TieBreakWeight& other) const noexcept {
  if (auto c = hops <=> other.hops; c != 0) return c;
  return perturbation <=> other.perturbation;
}

// ---------------------------------------------------------------------------
// Paths

Path path_from_vertices(const Graph& g, std::span<const Vertex> vertices) {
  Path p;
  p.vertices.assign(vertices.begin(), vertices.end());
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const auto e = g.find_edge(vertices[i], vertices[i + 1]);
    if (!e) throw std::invalid_argument("consecutive path vertices are not adjacent");
    p.edges.push_back(*e);
  }
  return p;
}

bool is_simple_path(const Graph& g, const Path& p) {
  if (p.vertices.empty() || p.edges.size() + 1 != p.vertices.size()) return false;
  std::unordered_set<Vertex> seen;
  for (const auto v : p.vertices)
    if (!seen.insert(v).second) return false;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto e = g.find_edge(p.vertices[i], p.vertices[i + 1]);
    if (!e || *e != p.edges[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Shortest paths

namespace {

struct BfsResult {
  std::vector<std::uint32_t> dist;
  std::vector<Vertex> order;  // visiting order, non-decreasing dist
};

BfsResult bfs(const GraphView& view, Vertex source, Vertex stop_after = kNoVertex) {
  const auto& g = view.base();
  BfsResult r;
  r.dist.assign(g.vertex_count(), kUnreachable);
  if (source >= g.vertex_count()) throw std::out_of_range("source out of range");
  if (!view.has_vertex(source)) return r;
  r.dist[source] = 0;
  r.order.reserve(g.vertex_count());
  r.order.push_back(source);
  std::uint32_t stop_depth = kUnreachable;
  for (std::size_t head = 0; head < r.order.size(); ++head) {
    const auto u = r.order[head];
    if (r.dist[u] >= stop_depth) break;
    for (const auto& inc : g.neighbors(u)) {
      if (r.dist[inc.to] != kUnreachable || !view.usable(inc.edge)) continue;
      r.dist[inc.to] = r.dist[u] + 1;
      r.order.push_back(inc.to);
      if (inc.to == stop_after) stop_depth = r.dist[inc.to];
    }
  }
  return r;
}

// Min-perturbation DP over the hop-layered DAG. Only vertices with marked[v]
// (or all reached vertices when `marked` is empty) are resolved.
void resolve_dag(const GraphView& view, const BfsResult& r, const std::vector<std::uint8_t>& marked,
                 std::vector<Vertex>& parent, std::vector<EdgeId>& parent_edge) {
  const auto& g = view.base();
  parent.assign(g.vertex_count(), kNoVertex);
  parent_edge.assign(g.vertex_count(), kNoEdge);
  std::vector<Perturbation> best(g.vertex_count());
  Perturbation candidate;
  for (const auto w : r.order) {
    if (r.dist[w] == 0) continue;
    if (!marked.empty() && !marked[w]) continue;
    bool have = false;
    for (const auto& inc : g.neighbors(w)) {
      const auto u = inc.to;
      if (r.dist[u] == kUnreachable || r.dist[u] + 1 != r.dist[w] || !view.usable(inc.edge)) continue;
      if (!marked.empty() && !marked[u]) continue;
      candidate = best[u];
      candidate.add_power_of_two(inc.edge);
      if (!have || candidate < best[w]) {
        best[w] = candidate;
        parent[w] = u;
        parent_edge[w] = inc.edge;
        have = true;
      }
    }
  }
}

}  // namespace

std::vector<std::uint32_t> bfs_distances(const GraphView& view, Vertex source) {
  return bfs(view, source).dist;
}

std::uint32_t hop_distance(const GraphView& view, Vertex source, Vertex target) {
  if (target >= view.base().vertex_count()) throw std::out_of_range("target out of range");
  return bfs(view, source, target).dist[target];
}

ShortestPathForest shortest_path_tree(const GraphView& view, Vertex source) {
  auto r = bfs(view, source);
  ShortestPathForest f;
  resolve_dag(view, r, {}, f.parent, f.parent_edge);
  f.dist = std::move(r.dist);
  return f;
}

std::optional<Path> shortest_path(const GraphView& view, Vertex source, Vertex target) {
  const auto& g = view.base();
  if (target >= g.vertex_count()) throw std::out_of_range("target out of range");
  const auto r = bfs(view, source, target);
  if (r.dist[target] == kUnreachable) return std::nullopt;
  if (target == source) return Path{{source}, {}};

  // Mark the DAG ancestors of the target.
  std::vector<std::uint8_t> marked(g.vertex_count(), 0);
  std::vector<Vertex> stack{target};
  marked[target] = 1;
  while (!stack.empty()) {
    const auto w = stack.back();
    stack.pop_back();
    for (const auto& inc : g.neighbors(w)) {
      const auto u = inc.to;
      if (marked[u] || r.dist[u] == kUnreachable || r.dist[u] + 1 != r.dist[w] || !view.usable(inc.edge)) continue;
      marked[u] = 1;
      stack.push_back(u);
    }
  }
  std::vector<Vertex> parent;
  std::vector<EdgeId> parent_edge;
  resolve_dag(view, r, marked, parent, parent_edge);

  Path p;
  for (auto v = target; v != source; v = parent[v]) {
    p.vertices.push_back(v);
    p.edges.push_back(parent_edge[v]);
  }
  p.vertices.push_back(source);
  std::reverse(p.vertices.begin(), p.vertices.end());
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

}  // namespace ftbfs
