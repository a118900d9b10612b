#include "ftbfs/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace ftbfs {

TreeDecomposition::TreeDecomposition(std::vector<TreePath> paths, std::size_t vertex_count)
    : paths_(std::move(paths)), path_of_(vertex_count, SIZE_MAX) {
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    for (const auto v : paths_[i].vertices) path_of_.at(v) = i;
    if (paths_[i].glue != kNoEdge) glue_.push_back(paths_[i].glue);
    max_level_ = std::max(max_level_, paths_[i].level);
  }
  std::sort(glue_.begin(), glue_.end());
}

bool TreeDecomposition::is_glue(EdgeId e) const { return std::binary_search(glue_.begin(), glue_.end(), e); }

TreeDecomposition heavy_path_decompose(const BfsTree& tree) {
  struct Pending {
    Vertex root;
    std::uint32_t level;
    EdgeId glue;
    std::size_t parent;
  };
  std::vector<TreePath> paths;
  std::vector<Pending> stack{{tree.source(), 0, kNoEdge, SIZE_MAX}};
  while (!stack.empty()) {
    const auto job = stack.back();
    stack.pop_back();
    TreePath path;
    path.level = job.level;
    path.glue = job.glue;
    path.parent = job.parent;
    path.input_size = tree.subtree_size(job.root);
    const auto index = paths.size();

    std::vector<Pending> hanging;
    for (Vertex v = job.root;;) {
      path.vertices.push_back(v);
      const auto& kids = tree.children(v);
      if (kids.empty()) break;
      Vertex heavy = kids.front();
      for (const auto c : kids) {
        const auto sc = tree.subtree_size(c);
        const auto sh = tree.subtree_size(heavy);
        if (sc > sh || (sc == sh && c < heavy)) heavy = c;
      }
      for (const auto c : kids)
        if (c != heavy) hanging.push_back({c, job.level + 1, tree.parent_edge(c), index});
      v = heavy;
    }
    paths.push_back(std::move(path));
    std::sort(hanging.begin(), hanging.end(), [](const Pending& a, const Pending& b) { return a.root > b.root; });
    stack.insert(stack.end(), hanging.begin(), hanging.end());
  }
  return TreeDecomposition(std::move(paths), tree.vertex_count());
}

SegmentDecomposition::SegmentDecomposition(std::uint32_t length) {
  if (length == 0) throw std::invalid_argument("segment decomposition of an empty path");
  boundaries_.push_back(0);
  const auto k = static_cast<std::uint32_t>(std::bit_width(length) - 1);
  const std::uint64_t L = length;
  for (std::uint32_t j = 1; j <= k; ++j) {
    const std::uint64_t pow = std::uint64_t{1} << j;
    boundaries_.push_back(static_cast<std::uint32_t>((L * (pow - 1) + pow - 1) / pow));
  }
  if (boundaries_.size() == 1)
    boundaries_.push_back(length);
  else
    boundaries_.back() = length;
}

std::size_t SegmentDecomposition::segment_of(std::uint32_t position) const {
  if (position >= length()) throw std::out_of_range("segment_of: position beyond path");
  const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), position);
  return static_cast<std::size_t>(it - boundaries_.begin()) - 1;
}

SegmentDecomposition segment_decompose(const Path& pi) {
  return SegmentDecomposition(static_cast<std::uint32_t>(pi.length()));
}

SegmentDecomposition segment_decompose(std::uint32_t length) { return SegmentDecomposition(length); }

PathIntersections tree_path_intersections(const TreeDecomposition& td, const BfsTree& tree, Vertex v) {
  if (!tree.reachable(v)) throw std::invalid_argument("tree_path_intersections: unreachable vertex");
  PathIntersections out;
  for (auto p = td.path_of(v);;) {
    out.paths.push_back(p);
    const auto& path = td.paths()[p];
    if (path.glue == kNoEdge) break;
    out.glue_edges.push_back(path.glue);
    p = path.parent;
  }
  std::reverse(out.paths.begin(), out.paths.end());
  std::reverse(out.glue_edges.begin(), out.glue_edges.end());
  return out;
}

EdgeRange shared_edges(const TreeDecomposition& td, const BfsTree& tree, std::size_t path, Vertex v) {
  const auto& psi = td.paths().at(path);
  const auto top = psi.top();
  if (!tree.is_ancestor(top, v)) return {};
  // deepest vertex of psi on pi(s, v)
  const auto last = std::min<std::size_t>(psi.vertices.size() - 1, tree.depth(v) - tree.depth(top));
  auto exit = last;
  while (exit > 0 && !tree.is_ancestor(psi.vertices[exit], v)) --exit;
  return {tree.depth(top), tree.depth(top) + static_cast<std::uint32_t>(exit)};
}

UpperLower upper_lower_intersect(const SegmentDecomposition& seg, EdgeRange psi) {
  UpperLower out;
  if (psi.empty()) return out;
  for (std::size_t j = 0; j < seg.segment_count(); ++j) {
    const auto s = seg.segment(j);
    const bool meets = s.begin < psi.end && psi.begin < s.end;
    const bool inside = psi.begin <= s.begin && s.end <= psi.end;
    if (!meets || inside) continue;
    if (!out.upper) out.upper = j;
    out.lower = j;
  }
  return out;
}

std::string dump_decomposition(const Graph& g, const TreeDecomposition& td) {
  std::ostringstream out;
  for (const auto& path : td.paths()) {
    out << "psi " << path.level;
    for (const auto v : path.vertices) out << ' ' << v;
    out << '\n';
  }
  for (const auto e : td.glue_edges()) {
    const auto& ed = g.edge(e);
    out << "glue " << std::min(ed.u, ed.v) << ' ' << std::max(ed.u, ed.v) << '\n';
  }
  return out.str();
}

}  // namespace ftbfs
