#include "ftbfs/ftbfs.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "ftbfs/construction.hpp"
#include "ftbfs/graph.hpp"
#include "ftbfs/lowerbound.hpp"
#include "ftbfs/verify.hpp"

struct ftbfs_graph {
  ftbfs::Graph g;
};

struct ftbfs_structure {
  ftbfs::FtBfsStructure s;
  const ftbfs::Graph* g;  // borrowed from the graph handle it was built or loaded with
};

struct ftbfs_report {
  ftbfs::VerificationReport r;
  const ftbfs::Graph* g;
};

struct ftbfs_lb_instance {
  ftbfs::LowerBoundInstance inst;
  ftbfs_graph graph;
};

namespace {

thread_local std::string last_error;

ftbfs_status fail(ftbfs_status status, const std::string& message) {
  last_error = message;
  return status;
}

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Fn>
ftbfs_status guarded(Fn&& fn) {
  try {
    fn();
    return FTBFS_OK;
  } catch (const ftbfs::ParseError& ex) {
    return fail(FTBFS_PARSE, ex.line() ? "line " + std::to_string(ex.line()) + ": " + ex.what() : ex.what());
  } catch (const ftbfs::InfeasibleParameters& ex) {
    return fail(FTBFS_INFEASIBLE, ex.what());
  } catch (const IoError& ex) {
    return fail(FTBFS_IO, ex.what());
  } catch (const std::invalid_argument& ex) {
    return fail(FTBFS_INVALID_ARGUMENT, ex.what());
  } catch (const std::out_of_range& ex) {
    return fail(FTBFS_INVALID_ARGUMENT, ex.what());
  } catch (const std::exception& ex) {
    return fail(FTBFS_INTERNAL, ex.what());
  } catch (...) {
    return fail(FTBFS_INTERNAL, "unknown error");
  }
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open '") + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw std::invalid_argument(std::string(what) + " is null");
}

size_t copy_ids(const std::vector<ftbfs::EdgeId>& ids, uint32_t* out, size_t capacity) {
  if (out != nullptr)
    for (size_t i = 0; i < ids.size() && i < capacity; ++i) out[i] = ids[i];
  return ids.size();
}

}  // namespace

extern "C" {

const char* ftbfs_last_error(void) { return last_error.c_str(); }

const char* ftbfs_version(void) { return "1.0.0"; }

void ftbfs_string_free(char* s) { std::free(s); }

ftbfs_status ftbfs_graph_load(const char* path, ftbfs_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ftbfs_graph{ftbfs::parse_graph(read_file(path))};
  });
}

ftbfs_status ftbfs_graph_parse(const char* text, size_t length, ftbfs_graph** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new ftbfs_graph{ftbfs::parse_graph(std::string_view(text, length))};
  });
}

ftbfs_status ftbfs_graph_write(const ftbfs_graph* g, const char* path) {
  return guarded([&] {
    require(g, "graph");
    require(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot write '") + path + "'");
    out << ftbfs::format_graph(g->g);
    if (!out) throw IoError(std::string("write failed for '") + path + "'");
  });
}

size_t ftbfs_graph_vertex_count(const ftbfs_graph* g) { return g ? g->g.vertex_count() : 0; }

size_t ftbfs_graph_edge_count(const ftbfs_graph* g) { return g ? g->g.edge_count() : 0; }

ftbfs_status ftbfs_graph_edge(const ftbfs_graph* g, uint32_t id, uint32_t* u, uint32_t* v) {
  return guarded([&] {
    require(g, "graph");
    const auto& e = g->g.edge(id);
    if (u) *u = e.u;
    if (v) *v = e.v;
  });
}

void ftbfs_graph_free(ftbfs_graph* g) { delete g; }

void ftbfs_build_options_init(ftbfs_build_options* options) {
  if (options == nullptr) return;
  *options = ftbfs_build_options{};
  options->epsilon = 0.5;
}

ftbfs_status ftbfs_build(const ftbfs_graph* g, const ftbfs_build_options* options, ftbfs_structure** out) {
  return guarded([&] {
    require(g, "graph");
    require(options, "options");
    require(out, "out");
    ftbfs::FtBfsStructure s;
    if (options->baseline) {
      s = ftbfs::build_baseline(g->g, options->source, options->epsilon, options->threads);
    } else {
      ftbfs::BuildOptions opts;
      opts.force_eps_machinery = options->force_eps_machinery != 0;
      opts.s1_distinct_against_h = options->s1_distinct_against_h != 0;
      opts.threads = options->threads;
      s = ftbfs::build_eps_ftbfs(g->g, options->source, options->epsilon, opts);
    }
    *out = new ftbfs_structure{std::move(s), &g->g};
  });
}

ftbfs_status ftbfs_structure_load(const ftbfs_graph* g, const char* path, ftbfs_structure** out) {
  return guarded([&] {
    require(g, "graph");
    require(path, "path");
    require(out, "out");
    *out = new ftbfs_structure{ftbfs::structure_from_json(g->g, read_file(path)), &g->g};
  });
}

ftbfs_status ftbfs_structure_parse(const ftbfs_graph* g, const char* text, size_t length, ftbfs_structure** out) {
  return guarded([&] {
    require(g, "graph");
    require(text, "text");
    require(out, "out");
    *out = new ftbfs_structure{ftbfs::structure_from_json(g->g, std::string(text, length)), &g->g};
  });
}

ftbfs_status ftbfs_structure_to_json(const ftbfs_structure* s, int with_timing, char** out) {
  return guarded([&] {
    require(s, "structure");
    require(out, "out");
    *out = dup_string(ftbfs::structure_to_json(*s->g, s->s, with_timing != 0));
  });
}

ftbfs_status ftbfs_structure_stats(const ftbfs_structure* s, ftbfs_stats* out) {
  return guarded([&] {
    require(s, "structure");
    require(out, "out");
    const auto& st = s->s.stats;
    *out = ftbfs_stats{st.b,           st.r,           st.k_eps,          st.phase_s1_added,
                       st.phase_s2_added, st.glue_added, st.s1_iterations, st.s1_leftover,
                       st.max_selection,  st.uncovered_pairs, st.wall_ms};
  });
}

uint32_t ftbfs_structure_source(const ftbfs_structure* s) { return s ? s->s.source : 0; }

size_t ftbfs_structure_backup(const ftbfs_structure* s, uint32_t* ids, size_t capacity) {
  return s ? copy_ids(s->s.backup, ids, capacity) : 0;
}

size_t ftbfs_structure_reinforced(const ftbfs_structure* s, uint32_t* ids, size_t capacity) {
  return s ? copy_ids(s->s.reinforced, ids, capacity) : 0;
}

void ftbfs_structure_free(ftbfs_structure* s) { delete s; }

void ftbfs_verify_options_init(ftbfs_verify_options* options) {
  if (options == nullptr) return;
  *options = ftbfs_verify_options{};
  options->sample = 1.0;
  options->seed = 1;
}

ftbfs_status ftbfs_verify(const ftbfs_graph* g, const ftbfs_structure* s, const uint32_t* sources,
                          size_t source_count, const ftbfs_verify_options* options, ftbfs_report** out) {
  return guarded([&] {
    require(g, "graph");
    require(s, "structure");
    require(out, "out");
    if (s->g->vertex_count() != g->g.vertex_count() || s->g->edge_count() != g->g.edge_count())
      throw std::invalid_argument("structure belongs to a different graph");
    ftbfs::VerifyOptions opts;
    if (options) {
      opts.sample = options->sample;
      opts.seed = options->seed;
      opts.naive = options->naive != 0;
      opts.threads = options->threads;
      if (options->failures) opts.failures.emplace(options->failures, options->failures + options->failure_count);
    }
    std::vector<ftbfs::Vertex> srcs;
    if (sources)
      srcs.assign(sources, sources + source_count);
    else
      srcs.push_back(s->s.source);
    const auto h = s->s.edges();
    *out = new ftbfs_report{ftbfs::verify_structure(g->g, srcs, h, s->s.reinforced, opts), &g->g};
  });
}

int ftbfs_report_ok(const ftbfs_report* r) { return r && r->r.ok ? 1 : 0; }

int ftbfs_report_partial(const ftbfs_report* r) { return r && r->r.partial ? 1 : 0; }

size_t ftbfs_report_violation_count(const ftbfs_report* r) { return r ? r->r.violations.size() : 0; }

size_t ftbfs_report_edges_checked(const ftbfs_report* r) { return r ? r->r.edges_checked : 0; }

ftbfs_status ftbfs_report_violation_json(const ftbfs_report* r, size_t index, char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    *out = dup_string(ftbfs::violation_to_json(*r->g, r->r.violations.at(index)));
  });
}

ftbfs_status ftbfs_report_to_json(const ftbfs_report* r, int with_timing, char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    *out = dup_string(ftbfs::report_to_json(*r->g, r->r, with_timing != 0));
  });
}

void ftbfs_report_free(ftbfs_report* r) { delete r; }

ftbfs_status ftbfs_lb_generate(size_t n, size_t source_count, double epsilon, ftbfs_lb_instance** out,
                               size_t* next_feasible_n) {
  if (next_feasible_n) *next_feasible_n = 0;
  return guarded([&] {
    require(out, "out");
    try {
      auto inst = source_count == 0 ? ftbfs::gen_single_source(n, epsilon)
                                     : ftbfs::gen_multi_source(n, source_count, epsilon);
      auto* handle = new ftbfs_lb_instance{std::move(inst), {}};
      handle->graph.g = handle->inst.graph;
      *out = handle;
    } catch (const ftbfs::InfeasibleParameters& ex) {
      if (next_feasible_n && ex.next_feasible_n()) *next_feasible_n = *ex.next_feasible_n();
      throw;
    }
  });
}

ftbfs_status ftbfs_lb_load(const char* graph_path, const char* sidecar_path, ftbfs_lb_instance** out) {
  return guarded([&] {
    require(graph_path, "graph path");
    require(sidecar_path, "sidecar path");
    require(out, "out");
    auto graph = ftbfs::parse_graph(read_file(graph_path));
    auto inst = ftbfs::lb_from_sidecar(std::move(graph), read_file(sidecar_path));
    auto* handle = new ftbfs_lb_instance{std::move(inst), {}};
    handle->graph.g = handle->inst.graph;
    *out = handle;
  });
}

const ftbfs_graph* ftbfs_lb_graph(const ftbfs_lb_instance* inst) { return inst ? &inst->graph : nullptr; }

ftbfs_status ftbfs_lb_summary_get(const ftbfs_lb_instance* inst, ftbfs_lb_summary* out) {
  return guarded([&] {
    require(inst, "instance");
    require(out, "out");
    const auto& i = inst->inst;
    std::size_t max_fan = 0;
    for (const auto& block : i.x_blocks) max_fan = std::max(max_fan, block.size());
    *out = ftbfs_lb_summary{i.d, i.k, i.sources.size(), i.forced.size(), i.min_block_size(), max_fan,
                            i.bipartite_edges().size()};
  });
}

ftbfs_status ftbfs_lb_sidecar_json(const ftbfs_lb_instance* inst, char** out) {
  return guarded([&] {
    require(inst, "instance");
    require(out, "out");
    *out = dup_string(ftbfs::lb_sidecar_json(inst->inst));
  });
}

ftbfs_status ftbfs_lb_audit(const ftbfs_lb_instance* inst, const ftbfs_structure* s, unsigned threads, int* ok,
                            char** json) {
  return guarded([&] {
    require(inst, "instance");
    require(s, "structure");
    const auto& g = inst->inst.graph;
    if (s->g->vertex_count() != g.vertex_count() || s->g->edge_count() != g.edge_count())
      throw std::invalid_argument("structure belongs to a different graph");
    const auto report = ftbfs::audit_lb(inst->inst, s->s.edges(), s->s.reinforced, threads);
    if (ok) *ok = report.ok ? 1 : 0;
    if (json) *json = dup_string(ftbfs::audit_to_json(inst->inst, report));
  });
}

void ftbfs_lb_instance_free(ftbfs_lb_instance* inst) { delete inst; }

}  // extern "C"
