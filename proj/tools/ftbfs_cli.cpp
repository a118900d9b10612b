#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftbfs/ftbfs.h"

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kInternal = 3 };

struct Failure {
  int code;
  std::string message;
};

int exit_for(ftbfs_status status) {
  switch (status) {
    case FTBFS_OK:
      return kOk;
    case FTBFS_INTERNAL:
      return kInternal;
    default:
      return kUsage;
  }
}

void check(ftbfs_status status) {
  if (status != FTBFS_OK) throw Failure{exit_for(status), ftbfs_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GraphPtr = std::unique_ptr<ftbfs_graph, Deleter<ftbfs_graph, ftbfs_graph_free>>;
using StructurePtr = std::unique_ptr<ftbfs_structure, Deleter<ftbfs_structure, ftbfs_structure_free>>;
using ReportPtr = std::unique_ptr<ftbfs_report, Deleter<ftbfs_report, ftbfs_report_free>>;
using LbPtr = std::unique_ptr<ftbfs_lb_instance, Deleter<ftbfs_lb_instance, ftbfs_lb_instance_free>>;

std::string take(char* s) {
  std::string out(s);
  ftbfs_string_free(s);
  return out;
}

GraphPtr load_graph(const std::string& path) {
  ftbfs_graph* g = nullptr;
  check(ftbfs_graph_load(path.c_str(), &g));
  return GraphPtr(g);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kUsage, "cannot write '" + path + "'"};
  out << text;
  if (!out) throw Failure{kUsage, "write failed for '" + path + "'"};
}

std::string number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Failure{kUsage, "epsilon must lie in (0,1]"};
}

struct BuildArgs {
  std::string graph, out;
  std::uint32_t source = 0;
  double epsilon = 0.5;
  bool baseline = false, force = false, against_h = false, timing = false;
  unsigned threads = 0;
};

int cmd_build(const BuildArgs& a) {
  check_epsilon(a.epsilon);
  auto g = load_graph(a.graph);
  ftbfs_build_options opts;
  ftbfs_build_options_init(&opts);
  opts.source = a.source;
  opts.epsilon = a.epsilon;
  opts.baseline = a.baseline;
  opts.force_eps_machinery = a.force;
  opts.s1_distinct_against_h = a.against_h;
  opts.threads = a.threads;
  ftbfs_structure* raw = nullptr;
  check(ftbfs_build(g.get(), &opts, &raw));
  StructurePtr s(raw);
  char* json = nullptr;
  check(ftbfs_structure_to_json(s.get(), a.timing, &json));
  write_file(a.out, take(json));
  ftbfs_stats st;
  check(ftbfs_structure_stats(s.get(), &st));
  std::cout << "b=" << st.b << " r=" << st.r << "\n";
  return kOk;
}

struct VerifyArgs {
  std::string graph, structure, report;
  std::vector<std::uint32_t> sources;
  double sample = 1.0;
  std::uint64_t seed = 1;
  bool naive = false, timing = false;
  unsigned threads = 0;
};

int cmd_verify(const VerifyArgs& a) {
  if (!(a.sample > 0.0 && a.sample <= 1.0)) throw Failure{kUsage, "sample must lie in (0,1]"};
  auto g = load_graph(a.graph);
  ftbfs_structure* raw = nullptr;
  check(ftbfs_structure_load(g.get(), a.structure.c_str(), &raw));
  StructurePtr s(raw);
  if (a.sample < 1.0) std::cout << "PARTIAL: checking a " << number(a.sample) << " sample of failures\n";
  ftbfs_verify_options opts;
  ftbfs_verify_options_init(&opts);
  opts.sample = a.sample;
  opts.seed = a.seed;
  opts.naive = a.naive;
  opts.threads = a.threads;
  ftbfs_report* rep = nullptr;
  check(ftbfs_verify(g.get(), s.get(), a.sources.empty() ? nullptr : a.sources.data(), a.sources.size(), &opts, &rep));
  ReportPtr report(rep);
  const auto count = ftbfs_report_violation_count(report.get());
  for (size_t i = 0; i < count; ++i) {
    char* line = nullptr;
    check(ftbfs_report_violation_json(report.get(), i, &line));
    std::cout << take(line) << "\n";
  }
  if (!a.report.empty()) {
    char* json = nullptr;
    check(ftbfs_report_to_json(report.get(), a.timing, &json));
    write_file(a.report, take(json));
  }
  const bool ok = ftbfs_report_ok(report.get());
  std::cout << (ok ? "ok" : "FAILED") << " edges_checked=" << ftbfs_report_edges_checked(report.get())
            << " violations=" << count << "\n";
  return ok ? kOk : kVerifyFailed;
}

struct GenArgs {
  std::size_t n = 0;
  double epsilon = 0.25;
  std::size_t sources = 0;
  std::string out;
};

int cmd_gen_lb(const GenArgs& a) {
  if (a.sources == 0 && !(a.epsilon > 0.0 && a.epsilon < 0.5))
    throw Failure{kUsage, "epsilon must lie in (0,1/2) for the single-source family"};
  if (a.sources > 0 && !(a.epsilon > 0.0 && a.epsilon <= 0.5))
    throw Failure{kUsage, "epsilon must lie in (0,1/2] for the multi-source family"};
  ftbfs_lb_instance* raw = nullptr;
  std::size_t next = 0;
  const auto status = ftbfs_lb_generate(a.n, a.sources, a.epsilon, &raw, &next);
  if (status == FTBFS_INFEASIBLE) {
    std::string msg = ftbfs_last_error();
    if (next == 0) msg += " (no feasible n nearby)";
    throw Failure{kUsage, msg};
  }
  check(status);
  LbPtr inst(raw);
  check(ftbfs_graph_write(ftbfs_lb_graph(inst.get()), (a.out + ".graph").c_str()));
  char* sidecar = nullptr;
  check(ftbfs_lb_sidecar_json(inst.get(), &sidecar));
  write_file(a.out + ".json", take(sidecar));
  ftbfs_lb_summary sum;
  check(ftbfs_lb_summary_get(inst.get(), &sum));
  std::cout << "d=" << sum.d << " k=" << sum.k << " |Pi|=" << sum.pi_edges << "\n";
  std::cout << "sources=" << sum.sources << " fan_min=" << sum.min_fan << " fan_max=" << sum.max_fan
            << " bipartite=" << sum.bipartite_edges << " n=" << ftbfs_graph_vertex_count(ftbfs_lb_graph(inst.get()))
            << " m=" << ftbfs_graph_edge_count(ftbfs_lb_graph(inst.get())) << "\n";
  return kOk;
}

struct AuditArgs {
  std::string graph, sidecar, structure;
  unsigned threads = 0;
};

int cmd_audit(const AuditArgs& a) {
  ftbfs_lb_instance* raw = nullptr;
  check(ftbfs_lb_load(a.graph.c_str(), a.sidecar.c_str(), &raw));
  LbPtr inst(raw);
  ftbfs_structure* sraw = nullptr;
  check(ftbfs_structure_load(ftbfs_lb_graph(inst.get()), a.structure.c_str(), &sraw));
  StructurePtr s(sraw);
  int ok = 0;
  char* json = nullptr;
  const auto status = ftbfs_lb_audit(inst.get(), s.get(), a.threads, &ok, &json);
  if (status == FTBFS_INVALID_ARGUMENT) throw Failure{kVerifyFailed, ftbfs_last_error()};
  check(status);
  std::cout << take(json);
  return ok ? kOk : kVerifyFailed;
}

struct SweepArgs {
  std::string graph, csv;
  std::uint32_t source = 0;
  std::vector<double> epsilons;
  double cost_b = 1.0, cost_r = 1.0;
  bool timing = false;
  unsigned threads = 0;
};

int cmd_sweep(const SweepArgs& a) {
  if (a.epsilons.empty()) throw Failure{kUsage, "empty epsilon list"};
  for (const auto e : a.epsilons) check_epsilon(e);
  auto g = load_graph(a.graph);
  const auto n = static_cast<double>(ftbfs_graph_vertex_count(g.get()));
  std::string csv = "epsilon,b,r,k_eps,wall_ms,cost\n";
  for (const auto eps : a.epsilons) {
    ftbfs_build_options opts;
    ftbfs_build_options_init(&opts);
    opts.source = a.source;
    opts.epsilon = eps;
    opts.threads = a.threads;
    ftbfs_structure* raw = nullptr;
    check(ftbfs_build(g.get(), &opts, &raw));
    StructurePtr s(raw);
    ftbfs_verify_options vopts;
    ftbfs_verify_options_init(&vopts);
    vopts.threads = a.threads;
    ftbfs_report* rep = nullptr;
    check(ftbfs_verify(g.get(), s.get(), nullptr, 0, &vopts, &rep));
    ReportPtr report(rep);
    if (!ftbfs_report_ok(report.get()))
      throw Failure{kInternal, "structure for epsilon=" + number(eps) + " failed verification"};
    ftbfs_stats st;
    check(ftbfs_structure_stats(s.get(), &st));
    const double cost = a.cost_b * static_cast<double>(st.b) + a.cost_r * static_cast<double>(st.r);
    csv += number(eps) + "," + std::to_string(st.b) + "," + std::to_string(st.r) + "," + std::to_string(st.k_eps) +
           "," + number(a.timing ? st.wall_ms : 0.0) + "," + number(cost) + "\n";
    const double eps_prime = n > 1 ? eps + std::log(std::log(n) / eps) / std::log(n) : eps;
    std::cout << "epsilon=" << number(eps) << " b=" << st.b << " r=" << st.r << " verified"
              << " (eps'=" << number(eps_prime) << ")\n";
  }
  write_file(a.csv, csv);
  if (a.cost_b > 0 && a.cost_r > 0 && n > 1)
    std::cout << "note: log(R/B)/log n = " << number(std::log(a.cost_r / a.cost_b) / std::log(n)) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault-tolerant BFS structures with reinforced edges"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build an epsilon FT-BFS structure");
  b->add_option("--graph", build.graph, "Graph file")->required();
  b->add_option("--source", build.source, "Source vertex")->required();
  b->add_option("--epsilon", build.epsilon, "Tradeoff parameter in (0,1]")->required();
  b->add_flag("--baseline", build.baseline, "T0 plus every uncovered last edge");
  b->add_flag("--force-eps-machinery", build.force, "Run the phases even for epsilon >= 1/2");
  b->add_flag("--s1-against-h", build.against_h, "Phase S1 counts only edges new to H");
  b->add_flag("--timing", build.timing, "Record wall time in the output");
  b->add_option("--threads", build.threads, "Worker cap (0: all)");
  b->add_option("--out", build.out, "Structure JSON")->required();

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check a structure against every single-edge failure");
  v->add_option("--graph", verify.graph, "Graph file")->required();
  v->add_option("--structure", verify.structure, "Structure JSON")->required();
  v->add_option("--sources", verify.sources, "Comma-separated sources")->delimiter(',');
  v->add_option("--sample", verify.sample, "Fraction of failures to check");
  v->add_option("--seed", verify.seed, "Sampling seed");
  v->add_flag("--naive", verify.naive, "Fresh BFS for every failure");
  v->add_option("--report", verify.report, "Write the full report JSON here");
  v->add_flag("--timing", verify.timing, "Record elapsed time in the report");
  v->add_option("--threads", verify.threads, "Worker cap (0: all)");

  GenArgs gen;
  auto* gl = app.add_subcommand("gen-lb", "Generate a lower-bound instance");
  gl->add_option("--n", gen.n, "Vertex count")->required();
  gl->add_option("--epsilon", gen.epsilon, "Tradeoff parameter")->required();
  gl->add_option("--sources", gen.sources, "Source count K for the multi-source family");
  gl->add_option("--out", gen.out, "Output prefix (.graph and .json)")->required();

  AuditArgs audit;
  auto* au = app.add_subcommand("audit", "Check forced-fan containment on a lower-bound instance");
  au->add_option("--graph", audit.graph, "Instance graph file")->required();
  au->add_option("--sidecar", audit.sidecar, "Instance sidecar JSON")->required();
  au->add_option("--structure", audit.structure, "Structure JSON")->required();
  au->add_option("--threads", audit.threads, "Worker cap (0: all)");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Build and verify across several epsilons");
  sw->add_option("--graph", sweep.graph, "Graph file")->required();
  sw->add_option("--source", sweep.source, "Source vertex")->required();
  sw->add_option("--epsilons", sweep.epsilons, "Comma-separated epsilons")->delimiter(',')->required();
  sw->add_option("--costB", sweep.cost_b, "Unit cost of a backup edge");
  sw->add_option("--costR", sweep.cost_r, "Unit cost of a reinforced edge");
  sw->add_flag("--timing", sweep.timing, "Record wall time in the CSV");
  sw->add_option("--threads", sweep.threads, "Worker cap (0: all)");
  sw->add_option("--csv", sweep.csv, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const auto code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*b) return cmd_build(build);
    if (*v) return cmd_verify(verify);
    if (*gl) return cmd_gen_lb(gen);
    if (*au) return cmd_audit(audit);
    if (*sw) return cmd_sweep(sweep);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
