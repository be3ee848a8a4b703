// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "fixtures.hpp"
#include "msopt/benders.hpp"
#include "msopt/dantzig_wolfe.hpp"
#include "msopt/instance_io.hpp"
#include "msopt/lagrangian.hpp"
#include "msopt/metrics.hpp"
#include "msopt/pamso.hpp"
#include "oracle.hpp"

using namespace msopt;
using namespace msopt::testing;

namespace {

constexpr std::uint64_t kSuiteSize = 100;

struct Criterion {
  std::string name;
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (notes.size() < 5) notes.push_back(what);
  }
};

int failures = 0;

void report(const Criterion& c) {
  std::printf("%s  %s\n", c.ok ? "PASS" : "FAIL", c.name.c_str());
  for (const auto& n : c.notes) std::printf("      %s\n", n.c_str());
  if (!c.ok) ++failures;
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SuiteRun {
  MultiScaleInstance inst;
  FullspaceSolution mm;
  AlgorithmResult benders, lag_cp, lag_sg, dw;
  std::vector<BendersCut> cuts;
};

std::string tag(std::uint64_t seed, const char* what) { return "seed " + std::to_string(seed) + ": " + what; }

double recourse_value(const MultiScaleInstance& inst, const FullspaceSolution& sol, std::size_t s) {
  const auto q = inst.effective_q(s);
  double v = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) v += q[j] * sol.y[s][j];
  return v;
}

}  // namespace

int main() {
  // the random suite is shared by the first four criteria
  std::vector<SuiteRun> suite(kSuiteSize);
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
    SuiteRun& run = suite[seed];
    run.inst = generate_random_instance(seed, suite_dims(seed));
    run.mm = solve_mm(run.inst);
    run.benders = run_benders(run.inst, {}, &run.cuts);
    run.lag_cp = run_lagrangian(run.inst);
    run.dw = run_dw(run.inst);
  }
  const double oracle_seconds = seconds_since(t0);
  for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
    LagrangianOptions sg;
    sg.method = LagrangianMethod::Subgradient;
    sg.max_iter = 200;
    suite[seed].lag_sg = run_lagrangian(suite[seed].inst, sg);
  }

  {
    Criterion c{"oracle equivalence: benders, lagrangian-cp, dw match fullspace on 100 random instances in < 60 s"};
    for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
      const auto& run = suite[seed];
      const double mm = run.mm.objective;
      const double tol = 1e-5 * (1 + std::abs(mm));
      for (const auto& [name, r] : {std::pair<const char*, const AlgorithmResult*>{"benders", &run.benders},
                                    {"lagrangian-cp", &run.lag_cp},
                                    {"dw", &run.dw}}) {
        c.require(r->status == AlgorithmStatus::Converged, tag(seed, name) + std::string(" did not converge"));
        c.require(std::abs(r->objective - mm) <= tol, tag(seed, name) + std::string(" objective off"));
      }
    }
    c.require(oracle_seconds < 60.0, "suite took " + std::to_string(oracle_seconds) + " s");
    c.name += " [" + std::to_string(oracle_seconds).substr(0, 5) + " s]";
    report(c);
  }

  {
    Criterion c{"bound sandwich and monotonicity at every logged iteration"};
    for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
      const auto& run = suite[seed];
      const double mm = run.mm.objective;
      for (const auto& [name, r] : {std::pair<const char*, const AlgorithmResult*>{"benders", &run.benders},
                                    {"lagrangian-cp", &run.lag_cp},
                                    {"lagrangian-sg", &run.lag_sg},
                                    {"dw", &run.dw}}) {
        for (const auto& e : r->log.entries()) {
          c.require(e.lower_bound <= mm + 1e-6, tag(seed, name) + std::string(" LB above MM"));
          c.require(e.upper_bound >= mm - 1e-6, tag(seed, name) + std::string(" UB below MM"));
        }
      }
      auto monotone = [](const AlgorithmResult& r, bool lower, bool increasing) {
        double prev = increasing ? -kInf : kInf;
        for (const auto& e : r.log.entries()) {
          const double v = lower ? e.lower_bound : e.upper_bound;
          if (increasing ? v < prev : v > prev) return false;
          prev = v;
        }
        return true;
      };
      c.require(monotone(run.benders, true, true), tag(seed, "benders LB decreased"));
      c.require(monotone(run.dw, false, false), tag(seed, "dw UB increased"));
      c.require(monotone(run.lag_cp, true, true), tag(seed, "lagrangian-cp best LB decreased"));
      c.require(monotone(run.lag_sg, true, true), tag(seed, "lagrangian-sg best LB decreased"));
    }
    report(c);
  }

  {
    Criterion c{"LP certificates: 200 tiny LPs match vertex enumeration; all certificates verify"};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const LinearProgram lp = random_bounded_lp(seed);
      const auto sol = solve_lp(lp);
      const auto ref = vertex_enumeration_min(lp);
      c.require(sol.optimal() && ref && std::abs(sol.objective - *ref) <= 1e-6, tag(seed, "vertex oracle mismatch"));
      c.require(verify_certificate(lp, sol).valid, tag(seed, "bounded LP certificate"));
    }
    int seen[3] = {0, 0, 0};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const LinearProgram lp = random_tiny_lp(seed);
      const auto sol = solve_lp(lp);
      ++seen[static_cast<int>(sol.status)];
      const auto v = verify_certificate(lp, sol);
      c.require(v.valid, tag(seed, "mixed LP certificate: ") + v.condition);
    }
    c.require(seen[0] > 0 && seen[1] > 0 && seen[2] > 0, "mixed suite lacks one of the three statuses");
    c.name += " [optimal " + std::to_string(seen[0]) + ", infeasible " + std::to_string(seen[1]) + ", unbounded " +
              std::to_string(seen[2]) + "]";
    report(c);
  }

  {
    Criterion c{"Benders cut validity; TINY-3 converges to 1 with a feasibility cut"};
    std::size_t total = 0;
    for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
      const auto& run = suite[seed];
      for (const auto& cut : run.cuts) {
        ++total;
        const double z = cut.kind == CutKind::Optimality ? recourse_value(run.inst, run.mm, cut.subperiod) : 0.0;
        c.require(cut.slack(run.mm.x, z) >= -1e-6, tag(seed, "cut violated by the full-space optimum"));
      }
    }
    std::vector<BendersCut> cuts;
    const auto r = run_benders(tiny3(), {}, &cuts);
    std::size_t feas = 0;
    for (const auto& cut : cuts) feas += cut.kind == CutKind::Feasibility;
    c.require(r.status == AlgorithmStatus::Converged && std::abs(r.objective - 1.0) <= 1e-9, "TINY-3 objective");
    c.require(feas >= 1, "TINY-3 produced no feasibility cut");
    c.name += " [" + std::to_string(total) + " cuts]";
    report(c);
  }

  {
    Criterion c{"metrics identities: VMM arithmetic, micro MM/MPSS/VMM, TINY-2 VSS, nonnegativity"};
    const double vmm = vmm_from(407520.75, 357408.98);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", vmm);
    c.require(std::string(buf) == "50111.77", std::string("VMM arithmetic gave ") + buf);
    const auto micro = compute_vmm(micro_capacity());
    c.require(std::abs(micro.mm - 7.0) <= 1e-9, "micro MM");
    c.require(std::abs(micro.mpss - 10.5) <= 1e-9, "micro MPSS");
    c.require(std::abs(micro.vmm - 3.5) <= 1e-9, "micro VMM");
    c.require(micro.vmm == micro.mpss - micro.mm, "VMM is not MPSS - MM");
    const auto t2 = compute_ev_eev_vss(tiny2());
    c.require(std::abs(t2.vss - 0.25) <= 1e-9, "TINY-2 VSS");
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto cap = random_capacity(seed, 1 + seed % 3, 1 + (seed / 3) % 3, 1 + seed % 4);
      c.require(compute_vmm(cap).vmm >= -1e-6, tag(seed, "negative VMM"));
      c.require(compute_ev_eev_vss(lower_capacity(cap)).vss >= -1e-6, tag(seed, "negative VSS"));
    }
    report(c);
  }

  {
    Criterion c{"PAMSO: MBBF(unit) = MPSS, monotone best-so-far, pattern search reaches MM, seeded GA stable"};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto cap = seed == 0 ? micro_capacity() : random_capacity(seed, 1 + seed % 3, 2, 1 + seed % 3);
      const double mpss = compute_vmm(cap).mpss;
      c.require(std::abs(evaluate_mbbf(cap, unit_params(cap)).objective - mpss) <= 1e-6, tag(seed, "MBBF(unit)"));
    }
    const auto cap = micro_capacity();
    for (auto dfo : {DfoBackend::PatternSearch, DfoBackend::Genetic}) {
      PamsoOptions opts;
      opts.dfo = dfo;
      opts.budget = 200;
      const auto r = run_pamso(cap, opts);
      double prev = kInf;
      for (const auto& e : r.log.entries()) {
        c.require(e.upper_bound <= prev, "best-so-far increased");
        prev = e.upper_bound;
      }
      if (dfo == DfoBackend::PatternSearch) {
        c.require(std::abs(r.objective - 7.0) <= 1e-6, "pattern search stopped at " + std::to_string(r.objective));
      }
      c.require(r.objective <= compute_vmm(cap).mpss + 1e-9, "tuner worse than MPSS");
    }
    PamsoOptions ga;
    ga.dfo = DfoBackend::Genetic;
    ga.budget = 200;
    ga.seed = 7;
    TuneResult a, b;
    run_pamso(random_capacity(3, 2, 2, 3), ga, &a);
    run_pamso(random_capacity(3, 2, 2, 3), ga, &b);
    c.require(a.trace.size() == b.trace.size() && a.best.objective == b.best.objective, "GA differs across runs");
    for (std::size_t i = 0; i < std::min(a.trace.size(), b.trace.size()); ++i) {
      c.require(a.trace[i].rho == b.trace[i].rho, "GA trace differs at " + std::to_string(i));
    }
    report(c);
  }

  {
    Criterion c{"determinism: repeated CLI commands give byte-identical JSON and CSV"};
    const auto dir = scratch_dir("acceptance");
    const auto inst_path = dir / "suite14.json";
    const auto cap_path = dir / "micro.json";
    write_instance(suite[14].inst, inst_path);
    write_instance(micro_capacity(), cap_path);
    auto twice = [&](const std::string& label, const std::string& args, bool with_log) {
      std::string outs[2], logs[2];
      for (int k = 0; k < 2; ++k) {
        const auto out = dir / (label + std::to_string(k) + ".json");
        const auto log = dir / (label + std::to_string(k) + ".csv");
        std::string cmd = args + " --out " + out.string();
        if (with_log) cmd += " --log " + log.string();
        const auto r = run_cli(cmd);
        c.require(r.code == 0 || r.code == 2, label + " exited " + std::to_string(r.code));
        outs[k] = slurp(out);
        if (with_log) logs[k] = slurp(log);
      }
      c.require(!outs[0].empty() && outs[0] == outs[1], label + " summary differs");
      if (with_log) c.require(!logs[0].empty() && logs[0] == logs[1], label + " CSV differs");
    };
    for (const char* alg : {"fullspace", "benders", "lagrangian-cp", "lagrangian-sg", "dw"}) {
      twice(alg, std::string("solve --algorithm ") + alg + " --threads 3 --instance " + inst_path.string(), true);
    }
    twice("pamso-ga", "solve --algorithm pamso --dfo genetic --seed 5 --budget 60 --instance " + cap_path.string(),
          true);
    twice("pamso-ps", "solve --algorithm pamso --budget 60 --instance " + cap_path.string(), true);
    twice("metrics", "metrics --instance " + cap_path.string(), false);
    twice("generate", "generate --seed 3 --n-subperiods 4", false);
    report(c);
  }

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
