// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "CLI11.hpp"
#include "envelopes.hpp"
#include "ftbfs/construction.hpp"
#include "ftbfs/lowerbound.hpp"
#include "ftbfs/verify.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace ftbfs;
namespace fs = std::filesystem;

namespace {

// Frozen from `calibrate 2000` on the calibration seeds (rounded up).
// No calibration build reinforces anything, so C_r is exactly 0.
constexpr double kCr = 0.0;
constexpr double kCb = 0.2032;

constexpr std::size_t kCorpusSize = 200;
constexpr std::size_t kMinDeletions = 50;
constexpr std::size_t kMaxDeletions = 64;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void line(int id, const char* name, const Outcome& o) {
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failed_ |= !o.pass;
  }
  void note(const std::string& text) {
    std::printf("     %s\n", text.c_str());
    std::fflush(stdout);
  }
  bool failed() const { return failed_; }

 private:
  bool failed_ = false;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<EdgeId> every_edge(const Graph& g) {
  std::vector<EdgeId> out(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) out[e] = e;
  return out;
}

struct CorpusResults {
  std::size_t builds = 0, failed_builds = 0, violations = 0;
  double max_r = 0, max_b = 0;
  std::size_t envelope_breaks = 0;
  std::string first_failure;
  std::size_t baseline_over = 0, baseline_unprotected = 0, baseline_unverified = 0;
  double baseline_worst = 0;
};

CorpusResults run_corpus() {
  CorpusResults res;
  const double all_eps[] = {0.2, 0.34, 0.5, 1.0};
  for (std::size_t i = 0; i < kCorpusSize; ++i) {
    const auto cg = testing_support::corpus_graph(testing_support::kAcceptanceSeedBase + i);
    const auto& g = cg.graph;
    const auto n = g.vertex_count();
    const std::vector<Vertex> src{0};
    for (const double eps : all_eps) {
      ++res.builds;
      const auto s = build_eps_ftbfs(g, 0, eps);
      const auto h = s.edges();
      const auto rep = verify_structure(g, src, h, s.reinforced);
      if (!rep.ok) {
        ++res.failed_builds;
        res.violations += rep.violations.size();
        if (res.first_failure.empty())
          res.first_failure = fmt("seed %llu eps %.2f", static_cast<unsigned long long>(cg.seed), eps);
      }
      if (eps == envelopes::kEpsilons[0] || eps == envelopes::kEpsilons[1]) {
        const double rr = envelopes::reinforcement_ratio(s.reinforced.size(), n, eps);
        const double rb = envelopes::size_ratio(h.size(), n, eps);
        res.max_r = std::max(res.max_r, rr);
        res.max_b = std::max(res.max_b, rb);
        if (rr > kCr || rb > kCb) ++res.envelope_breaks;
      }
    }

    const BfsTree tree(g, 0);
    const auto table = pcons_all(g, tree);
    const auto base = baseline_ftbfs(g, tree, table);
    const double limit = std::pow(static_cast<double>(n), 1.5) + static_cast<double>(n);
    res.baseline_worst = std::max(res.baseline_worst, static_cast<double>(base.size()) / limit);
    if (static_cast<double>(base.size()) > limit) ++res.baseline_over;
    if (!compute_unprotected(g, tree, base).empty()) ++res.baseline_unprotected;
    const auto b = build_baseline(g, 0, 0.5);
    if (!verify_structure(g, src, b.edges(), b.reinforced).ok || !b.reinforced.empty()) ++res.baseline_unverified;
  }
  return res;
}

// Deletes sampled forced edges (x, z) whose pi edge is unreinforced and
// checks that the failure of that pi edge then leaves a witness at x.
struct DeletionResult {
  std::size_t sampled = 0, witnessed = 0;
};

DeletionResult forced_deletions(const LowerBoundInstance& inst, const std::vector<EdgeId>& h,
                                const std::vector<EdgeId>& reinforced, std::uint64_t seed) {
  struct Candidate {
    const ForcedSet* f;
    EdgeId edge;
  };
  std::vector<Candidate> pool;
  for (const auto& f : inst.forced) {
    if (std::binary_search(reinforced.begin(), reinforced.end(), f.pi_edge)) continue;
    for (const auto e : inst.forced_edges(f))
      if (std::binary_search(h.begin(), h.end(), e)) pool.push_back({&f, e});
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  if (pool.size() > kMaxDeletions) pool.resize(kMaxDeletions);

  DeletionResult out;
  for (const auto& c : pool) {
    const auto& ed = inst.graph.edge(c.edge);
    const Vertex x = ed.u == c.f->z ? ed.v : ed.u;
    std::vector<EdgeId> h_minus;
    h_minus.reserve(h.size());
    for (const auto e : h)
      if (e != c.edge) h_minus.push_back(e);
    std::vector<EdgeId> r_minus;
    for (const auto e : reinforced)
      if (e != c.edge) r_minus.push_back(e);
    VerifyOptions only;
    only.failures = std::vector<EdgeId>{c.f->pi_edge};
    const auto rep = verify_structure(inst.graph, inst.sources, h_minus, r_minus, only);
    ++out.sampled;
    const Vertex source = inst.copies[c.f->copy].source;
    const bool witness = std::any_of(rep.violations.begin(), rep.violations.end(), [&](const Violation& v) {
      return v.v == x && v.edge == c.f->pi_edge && v.source == source;
    });
    if (!rep.ok && witness) ++out.witnessed;
  }
  return out;
}

// Criterion 4 body for one feasible instance.
Outcome single_source_instance(std::size_t n, double eps) {
  const auto inst = gen_single_source(n, eps);
  const auto s = build_eps_ftbfs(inst.graph, 0, eps);
  const auto h = s.edges();
  const std::vector<Vertex> src{0};
  if (!verify_structure(inst.graph, src, h, s.reinforced).ok) return {false, "construction output fails verification"};
  const auto audit = audit_lb(inst, h, s.reinforced);
  const auto del = forced_deletions(inst, h, s.reinforced, n * 1000 + static_cast<std::size_t>(eps * 100));
  const double r_scale = envelopes::reinforcement_scale(n, eps);
  Outcome o;
  o.pass = audit.ok && del.sampled >= kMinDeletions && del.witnessed == del.sampled;
  o.detail = fmt("n=%zu eps=%.2f d=%u k=%u |Pi|=%zu b=%zu r=%zu (r/scale=%.3f) audit=%s deletions %zu/%zu witnessed", n,
                 eps, inst.d, inst.k, audit.pi_edges, s.backup.size(), s.reinforced.size(), s.reinforced.size() / r_scale,
                 audit.ok ? "ok" : "FAILED", del.witnessed, del.sampled);
  return o;
}

Outcome multi_source_instance(std::size_t n, std::size_t sources, double eps) {
  const auto inst = gen_multi_source(n, sources, eps);
  const auto all = every_edge(inst.graph);
  const auto probe = audit_lb(inst, all, {});
  auto pi = inst.pi_edges();
  std::sort(pi.begin(), pi.end());
  std::vector<EdgeId> reinforced(pi.begin(), pi.begin() + std::min(probe.budget, pi.size()));
  const auto audit = audit_lb(inst, all, reinforced);
  const auto del = forced_deletions(inst, all, reinforced, n * 1000 + sources);
  Outcome o;
  o.pass = audit.ok && del.sampled >= kMinDeletions && del.witnessed == del.sampled;
  o.detail = fmt("n=%zu K=%zu eps=%.2f d=%u k=%u |Pi|=%zu budget=%zu audit=%s deletions %zu/%zu witnessed", n, sources,
                 eps, inst.d, inst.k, audit.pi_edges, probe.budget, audit.ok ? "ok" : "FAILED", del.witnessed,
                 del.sampled);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& cli, const std::string& args, const fs::path& work) {
  const std::string cmd = "cd '" + work.string() + "' && '" + cli + "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

Outcome determinism(const std::string& cli, const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  {
    std::ofstream(work / "corpus.graph") << format_graph(testing_support::corpus_graph(7).graph);
    std::ofstream(work / "lb.graph") << format_graph(gen_single_source(256, 0.25).graph);
  }
  const char* runs[][2] = {
      {"build --graph corpus.graph --source 0 --epsilon 0.34 --out build_%d.json", "build_%d.json"},
      {"build --graph lb.graph --source 0 --epsilon 0.25 --out lb_build_%d.json", "lb_build_%d.json"},
      {"sweep --graph corpus.graph --source 0 --epsilons 0.2,0.34,0.5,1 --csv sweep_%d.csv", "sweep_%d.csv"},
      {"sweep --graph lb.graph --source 0 --epsilons 0.2,0.25 --costR 10 --csv lb_sweep_%d.csv", "lb_sweep_%d.csv"},
  };
  std::size_t identical = 0;
  std::string bad;
  for (const auto& r : runs) {
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      if (run_cli(cli, fmt(r[0], k), work) != 0) return {false, fmt("cli failed: %s", fmt(r[0], k).c_str())};
      outputs[k] = slurp(work / fmt(r[1], k));
    }
    if (!outputs[0].empty() && outputs[0] == outputs[1])
      ++identical;
    else if (bad.empty())
      bad = fmt(r[1], 0);
  }
  const std::size_t total = sizeof runs / sizeof runs[0];
  Outcome o;
  o.pass = identical == total;
  o.detail = fmt("%zu/%zu output pairs byte-identical", identical, total);
  if (!bad.empty()) o.detail += " (differs: " + bad + ")";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string cli;
  std::string work = "acceptance_work";
  app.add_option("--cli", cli, "Path to ftbfs-cli")->required();
  app.add_option("--work", work, "Scratch directory");
  CLI11_PARSE(app, argc, argv);
  cli = fs::absolute(cli).string();

  Report report;
  const auto t0 = std::chrono::steady_clock::now();

  const auto corpus = run_corpus();
  {
    Outcome o;
    o.pass = corpus.failed_builds == 0;
    o.detail = fmt("%zu graphs x 4 epsilons, %zu builds, %zu failing, %zu violations", kCorpusSize, corpus.builds,
                   corpus.failed_builds, corpus.violations);
    if (!corpus.first_failure.empty()) o.detail += " (first: " + corpus.first_failure + ")";
    report.line(1, "oracle soundness", o);
  }
  {
    Outcome o;
    o.pass = corpus.baseline_over == 0 && corpus.baseline_unprotected == 0 && corpus.baseline_unverified == 0;
    o.detail = fmt("max |H|/(n^1.5+n)=%.3f, over=%zu, unprotected nonempty=%zu, unverified=%zu", corpus.baseline_worst,
                   corpus.baseline_over, corpus.baseline_unprotected, corpus.baseline_unverified);
    report.line(2, "baseline size envelope", o);
  }
  {
    Outcome o;
    o.pass = corpus.envelope_breaks == 0;
    o.detail = fmt("C_r=%.4f observed %.4f, C_b=%.4f observed %.4f, breaks=%zu", kCr, corpus.max_r, kCb, corpus.max_b,
                   corpus.envelope_breaks);
    report.line(3, "reinforcement and size envelopes", o);
  }

  {
    Outcome o;
    std::vector<std::string> parts;
    const std::size_t ns[] = {256, 1024};
    const double epss[] = {0.2, 0.25};
    for (const auto n : ns)
      for (const auto eps : epss) {
        try {
          const auto r = single_source_instance(n, eps);
          o.pass &= r.pass;
          report.note(r.detail);
        } catch (const InfeasibleParameters& err) {
          o.pass = false;
          const auto next = err.next_feasible_n();
          parts.push_back(fmt("n=%zu eps=%.2f infeasible", n, eps));
          report.note(fmt("n=%zu eps=%.2f infeasible: %s", n, eps, err.what()));
          if (next && std::find(std::begin(ns), std::end(ns), *next) == std::end(ns)) {
            const auto r = single_source_instance(*next, eps);
            report.note("supplementary " + r.detail + (r.pass ? " PASS" : " FAIL"));
          } else if (next) {
            report.note(fmt("smallest feasible n=%zu is covered above", *next));
          }
        }
      }
    o.detail = parts.empty() ? "all instances audit and every sampled deletion is witnessed" : "";
    for (std::size_t i = 0; i < parts.size(); ++i) o.detail += (i ? "; " : "") + parts[i];
    report.line(4, "lower-bound mechanism", o);
  }

  {
    Outcome o;
    std::vector<std::string> parts;
    for (const std::size_t k : {2, 4}) {
      const std::size_t n = 512;
      try {
        const auto r = multi_source_instance(n, k, 0.25);
        o.pass &= r.pass;
        report.note(r.detail);
      } catch (const InfeasibleParameters& err) {
        o.pass = false;
        parts.push_back(fmt("n=%zu K=%zu infeasible", n, k));
        report.note(fmt("n=%zu K=%zu eps=0.25 infeasible: %s", n, k, err.what()));
        // smallest feasible n with room for the sampled deletions
        auto next = err.next_feasible_n();
        Outcome r;
        for (int tries = 0; next && tries < 16; ++tries) {
          r = multi_source_instance(*next, k, 0.25);
          if (r.pass) break;
          next = min_feasible_n(*next + 1, k, true, 0.25);
        }
        if (!r.detail.empty()) report.note("supplementary " + r.detail + (r.pass ? " PASS" : " FAIL"));
      }
    }
    o.detail = parts.empty() ? "all instances audit and every sampled deletion is witnessed" : "";
    for (std::size_t i = 0; i < parts.size(); ++i) o.detail += (i ? "; " : "") + parts[i];
    report.line(5, "multi-source mechanism", o);
  }

  {
    checks::Log log;
    const auto sum = checks::run_path_suite(500, 2024, log);
    Outcome o;
    o.pass = log.ok() && sum.instances == 500;
    o.detail = fmt("%zu instances (%zu new-ending, %zu bridges), %zu checks, %zu failures", sum.instances,
                   sum.new_ending, sum.bridges, log.checks, log.failures.size());
    if (!log.ok()) o.detail += " (first: " + log.failures.front() + ")";
    report.line(6, "path-structure properties", o);
  }

  {
    checks::Log log;
    const auto trees = checks::run_decomposition_suite(200, 2000, 2025, log);
    Outcome o;
    o.pass = log.ok() && trees == 200;
    o.detail = fmt("%zu trees, %zu checks, %zu failures", trees, log.checks, log.failures.size());
    if (!log.ok()) o.detail += " (first: " + log.failures.front() + ")";
    report.line(7, "decomposition guarantees", o);
  }

  report.line(8, "determinism", determinism(cli, fs::path(work)));

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("total %.1f s\n", secs);
  return report.failed() ? 1 : 0;
}
