// msopt: solve, score and generate multi-time-scale LP instances.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "msopt/benders.hpp"
#include "msopt/dantzig_wolfe.hpp"
#include "msopt/error.hpp"
#include "msopt/instance_io.hpp"
#include "msopt/lagrangian.hpp"
#include "msopt/metrics.hpp"
#include "msopt/pamso.hpp"

namespace {

using namespace msopt;
using nlohmann::json;

enum class Level { Error = 0, Info = 1, Debug = 2 };

Level log_level() {
  const char* env = std::getenv("MSOPT_LOG_LEVEL");
  if (!env) return Level::Error;
  const std::string v = env;
  if (v == "debug") return Level::Debug;
  if (v == "info") return Level::Info;
  return Level::Error;
}

void log(Level at, const std::string& msg) {
  static const Level level = log_level();
  if (at <= level) std::cerr << "msopt: " << msg << "\n";
}

struct Config {
  std::string algorithm;
  std::string instance;
  double tol = 1e-6;
  std::size_t max_iter = 100;
  double big_m = 1e7;
  double nu_box = 1e6;
  std::string dfo = "pattern";
  std::size_t budget = 200;
  std::uint64_t seed = 0;
  std::string out;
  std::string log;
  std::size_t threads = 1;
  bool wall_clock = false;
  std::string report = "all";
  RandomDims dims;
};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string log_csv(const ConvergenceLog& log, bool wall_clock) {
  std::ostringstream os;
  os << "iteration,lower_bound,upper_bound,gap,wall_millis\n";
  for (const auto& e : log.entries()) {
    os << e.iteration << ',' << format_double(e.lower_bound) << ',' << format_double(e.upper_bound) << ','
       << format_double(e.gap) << ',' << (wall_clock ? e.wall_millis : 0) << '\n';
  }
  return os.str();
}

std::string summary_json(const std::string& algorithm, const AlgorithmResult& r) {
  json j;
  j["algorithm"] = algorithm;
  j["status"] = std::string(to_string(r.status));
  j["objective"] = number(r.objective);
  j["lower_bound"] = number(r.lower_bound);
  j["upper_bound"] = number(r.upper_bound);
  j["iterations"] = r.iterations;
  j["x"] = r.x;
  j["y"] = r.y;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

int exit_code(AlgorithmStatus s) {
  switch (s) {
    case AlgorithmStatus::Converged: return 0;
    case AlgorithmStatus::IterationLimit:
    case AlgorithmStatus::ArtificialsNonzero: return 2;
    case AlgorithmStatus::Infeasible:
    case AlgorithmStatus::Unbounded: return 3;
  }
  return 1;
}

AlgorithmResult solve_fullspace(const MultiScaleInstance& inst) {
  AlgorithmResult r;
  r.iterations = 1;
  const LpSolution sol = solve_lp(build_fullspace(inst));
  if (sol.status != LpStatus::Optimal) {
    r.status = sol.status == LpStatus::Infeasible ? AlgorithmStatus::Infeasible : AlgorithmStatus::Unbounded;
    return r;
  }
  const auto split = split_fullspace(inst, sol);
  r.status = AlgorithmStatus::Converged;
  r.objective = r.lower_bound = r.upper_bound = split.objective;
  r.x = split.x;
  r.y = split.y;
  r.log.record(1, r.lower_bound, r.upper_bound);
  return r;
}

int cmd_solve(const Config& cfg) {
  const AnyInstance any = read_instance(cfg.instance);
  log(Level::Info, "loaded " + cfg.instance);
  AlgorithmResult r;
  const std::string& a = cfg.algorithm;
  if (a == "pamso") {
    const auto* cap = std::get_if<CapacityInstance>(&any);
    if (!cap) {
      std::cerr << "msopt: pamso requires a capacity instance\n";
      return 1;
    }
    PamsoOptions opts;
    opts.dfo = cfg.dfo == "genetic" ? DfoBackend::Genetic : DfoBackend::PatternSearch;
    opts.budget = cfg.budget;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    r = run_pamso(*cap, opts);
  } else {
    const MultiScaleInstance inst = as_multiscale(any);
    if (a == "fullspace") {
      r = solve_fullspace(inst);
    } else if (a == "benders") {
      BendersOptions opts;
      opts.tol = cfg.tol;
      opts.max_iter = cfg.max_iter;
      opts.big_m = cfg.big_m;
      opts.threads = cfg.threads;
      r = run_benders(inst, opts);
    } else if (a == "lagrangian-cp" || a == "lagrangian-sg") {
      LagrangianOptions opts;
      opts.method = a == "lagrangian-cp" ? LagrangianMethod::CuttingPlane : LagrangianMethod::Subgradient;
      opts.tol = cfg.tol;
      opts.max_iter = cfg.max_iter;
      opts.nu_box = cfg.nu_box;
      opts.threads = cfg.threads;
      r = run_lagrangian(inst, opts);
    } else {
      DwOptions opts;
      opts.tol = cfg.tol;
      opts.max_iter = cfg.max_iter;
      opts.threads = cfg.threads;
      r = run_dw(inst, opts);
    }
  }
  for (const auto& w : r.warnings) log(Level::Info, "warning: " + w);
  log(Level::Debug, "iterations: " + std::to_string(r.iterations));
  emit(summary_json(a, r), cfg.out);
  if (!cfg.log.empty()) emit(log_csv(r.log, cfg.wall_clock), cfg.log);
  return exit_code(r.status);
}

int cmd_metrics(const Config& cfg) {
  const AnyInstance any = read_instance(cfg.instance);
  const auto* cap = std::get_if<CapacityInstance>(&any);
  const bool want_vmm = cfg.report == "all" || cfg.report == "vmm";
  const bool want_vss = cfg.report == "all" || cfg.report == "vss";
  if (cfg.report == "vmm" && !cap) {
    std::cerr << "msopt: vmm requires a high-level builder\n";
    return 1;
  }
  MetricsReport report;
  if (want_vmm && cap) report = compute_vmm(*cap);
  if (want_vss) {
    const MetricsReport vss = compute_ev_eev_vss(as_multiscale(any));
    report.mm = vss.mm;
    report.ev = vss.ev;
    report.eev = vss.eev;
    report.vss = vss.vss;
    report.x_ev = vss.x_ev;
    report.sentinel_used.eev = vss.sentinel_used.eev;
    report.has_vss = true;
    // both differences share one MM
    if (report.has_vmm) report.vmm = vmm_from(report.mpss, report.mm);
  }
  emit(report_to_json(report), cfg.out);
  return 0;
}

int cmd_generate(const Config& cfg) {
  const RandomDims& d = cfg.dims;
  if (d.n_x == 0 || d.n_y == 0 || d.m_sub == 0 || d.n_subperiods == 0) {
    std::cerr << "msopt: every dimension must be at least 1\n";
    return 1;
  }
  emit(dump_instance(generate_random_instance(cfg.seed, d)), cfg.out);
  return 0;
}

int cmd_convert(const Config& cfg) {
  const AnyInstance any = read_instance(cfg.instance);
  emit(dump_instance(as_multiscale(any)), cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decomposition solvers for multi-time-scale linear models"};
  app.require_subcommand(1);
  Config cfg;

  auto* solve = app.add_subcommand("solve", "Run one algorithm on an instance file");
  solve->add_option("--algorithm", cfg.algorithm, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"fullspace", "benders", "lagrangian-cp", "lagrangian-sg", "dw", "pamso"}));
  solve->add_option("--instance", cfg.instance, "Instance file")->required();
  solve->add_option("--tol", cfg.tol, "Relative gap tolerance")->capture_default_str();
  solve->add_option("--max-iter", cfg.max_iter, "Iteration limit")->capture_default_str();
  solve->add_option("--big-m", cfg.big_m, "Benders epigraph bound")->capture_default_str();
  solve->add_option("--nu-box", cfg.nu_box, "Lagrangian multiplier box")->capture_default_str();
  solve->add_option("--dfo", cfg.dfo, "PAMSO tuner")->check(CLI::IsMember({"pattern", "genetic"}));
  solve->add_option("--budget", cfg.budget, "PAMSO evaluation budget")->capture_default_str();
  solve->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  solve->add_option("--out", cfg.out, "Summary JSON path (default stdout)");
  solve->add_option("--log", cfg.log, "Convergence CSV path");
  solve->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
  solve->add_flag("--wall-clock", cfg.wall_clock, "Record elapsed milliseconds in the CSV");

  auto* metrics = app.add_subcommand("metrics", "Compute VMM / VSS");
  metrics->add_option("--instance", cfg.instance, "Instance file")->required();
  metrics->add_option("--report", cfg.report, "Which metrics")->check(CLI::IsMember({"all", "vmm", "vss"}));
  metrics->add_option("--out", cfg.out, "Report JSON path (default stdout)");

  auto* generate = app.add_subcommand("generate", "Write a seeded random instance");
  generate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  generate->add_option("--n-x", cfg.dims.n_x, "First-stage variables")->capture_default_str();
  generate->add_option("--n-y", cfg.dims.n_y, "Variables per subperiod")->capture_default_str();
  generate->add_option("--m-sub", cfg.dims.m_sub, "Rows per subperiod")->capture_default_str();
  generate->add_option("--n-subperiods", cfg.dims.n_subperiods, "Subperiods")->capture_default_str();
  generate->add_option("--out", cfg.out, "Output path (default stdout)");

  auto* convert = app.add_subcommand("convert", "Lower a capacity file to a multiscale file");
  convert->add_option("--instance", cfg.instance, "Instance file")->required();
  convert->add_option("--out", cfg.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*metrics) return cmd_metrics(cfg);
    if (*generate) return cmd_generate(cfg);
    if (*convert) return cmd_convert(cfg);
  } catch (const ParseError& e) {
    std::cerr << "msopt: ParseError: " << e.what() << "\n";
    return 1;
  } catch (const SchemaVersionMismatch& e) {
    std::cerr << "msopt: SchemaVersionMismatch: " << e.what() << "\n";
    return 1;
  } catch (const InfeasibleInstance& e) {
    std::cerr << "msopt: infeasible: " << e.what() << "\n";
    return 3;
  } catch (const UnboundedInstance& e) {
    std::cerr << "msopt: unbounded: " << e.what() << "\n";
    return 3;
  } catch (const SubproblemUnbounded& e) {
    std::cerr << "msopt: unbounded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "msopt: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
