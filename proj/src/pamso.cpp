#include "msopt/pamso.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "msopt/error.hpp"
#include "msopt/metrics.hpp"
#include "msopt/parallel.hpp"

namespace msopt {

std::vector<ParamBounds> default_pamso_bounds(const CapacityInstance& cap) {
  std::vector<ParamBounds> b(cap.J, ParamBounds{0.0, 1.5});
  double peak = 0.0;
  for (const auto& ds : cap.d) {
    double total = 0.0;
    for (double v : ds) total += v;
    peak = std::max(peak, total);
  }
  b.push_back({0.0, peak});
  return b;
}

std::vector<double> unit_params(const CapacityInstance& cap) {
  std::vector<double> rho(cap.J + 1, 1.0);
  rho[cap.J] = 0.0;
  return rho;
}

MbbfRecord evaluate_mbbf(const CapacityInstance& cap, std::span<const double> rho, const MbbfOptions& opts) {
  MbbfRecord rec;
  rec.rho.assign(rho.begin(), rho.end());
  LinearProgram high = aggregate_capacity_highlevel(cap, rho);
  if (std::isfinite(opts.x_upper)) {
    for (std::size_t j = 0; j < cap.J; ++j) high.bounds[j].upper = opts.x_upper;
  }
  const LpSolution hs = solve_lp(high, opts.lp);
  if (!hs.optimal()) return rec;
  rec.x.assign(hs.primal.begin(), hs.primal.begin() + static_cast<std::ptrdiff_t>(cap.J));
  const auto low = solve_fixed_x(lower_capacity(cap), rec.x, opts.lp);
  if (!low) return rec;
  rec.objective = low->objective;
  rec.y = low->y;
  rec.feasible = true;
  return rec;
}

namespace {

void check_bounds(const std::vector<double>& p, const std::vector<ParamBounds>& bounds) {
  if (p.size() != bounds.size()) throw DimensionMismatch("parameter vector and bounds differ in length");
  for (const auto& b : bounds) {
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || b.lower > b.upper) {
      throw InvalidProblem("parameter bounds must be finite with lower <= upper");
    }
  }
}

std::vector<double> clip(std::vector<double> p, const std::vector<ParamBounds>& bounds) {
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], bounds[i].lower, bounds[i].upper);
  return p;
}

}  // namespace

TuneResult tune_pattern_search(const MbbfObjective& objective, const std::vector<double>& start,
                               const std::vector<ParamBounds>& bounds, const PatternSearchOptions& opts) {
  check_bounds(start, bounds);
  TuneResult out;
  if (opts.budget == 0) return out;
  const std::size_t n = start.size();
  std::vector<double> step = opts.init_step;
  if (step.empty()) {
    for (const auto& b : bounds) step.push_back(0.25 * (b.upper - b.lower));
  }
  if (step.size() != n) throw DimensionMismatch("init_step length differs from the parameter count");

  std::vector<double> current = clip(start, bounds);
  out.best = objective(current);
  out.trace.push_back(out.best);

  while (out.trace.size() < opts.budget) {
    std::vector<std::vector<double>> probes;
    for (std::size_t i = 0; i < n; ++i) {
      for (double dir : {1.0, -1.0}) {
        std::vector<double> p = current;
        p[i] += dir * step[i];
        p = clip(std::move(p), bounds);
        if (p != current && std::find(probes.begin(), probes.end(), p) == probes.end()) probes.push_back(p);
      }
    }
    probes.resize(std::min(probes.size(), opts.budget - out.trace.size()));
    if (probes.empty()) {
      bool any = false;
      for (double& s : step) {
        s *= opts.shrink;
        any = any || s > opts.min_step;
      }
      if (!any) break;
      continue;
    }
    const auto evals = parallel_map(probes.size(), opts.threads, [&](std::size_t i) { return objective(probes[i]); });
    std::size_t best_probe = evals.size();
    for (std::size_t i = 0; i < evals.size(); ++i) {
      out.trace.push_back(evals[i]);
      const double ref = best_probe < evals.size() ? evals[best_probe].objective : out.best.objective;
      if (evals[i].objective < ref) best_probe = i;
    }
    if (best_probe < evals.size()) {
      out.best = evals[best_probe];
      current = probes[best_probe];
    } else {
      bool any = false;
      for (double& s : step) {
        s *= opts.shrink;
        any = any || s > opts.min_step;
      }
      if (!any) break;
    }
  }
  return out;
}

std::size_t tournament_winner(std::span<const double> fitness, std::span<const std::size_t> contestants) {
  if (contestants.empty()) throw InvalidProblem("tournament needs at least one contestant");
  std::size_t win = contestants[0];
  for (std::size_t c : contestants) {
    if (fitness[c] < fitness[win]) win = c;
  }
  return win;
}

TuneResult tune_genetic(const MbbfObjective& objective, const std::vector<ParamBounds>& bounds,
                        const std::vector<double>& baseline, const GeneticOptions& opts) {
  if (opts.pop_size < 2) throw InvalidProblem("genetic algorithm needs pop_size >= 2");
  if (!baseline.empty()) check_bounds(baseline, bounds);
  const std::size_t n = bounds.size();
  const std::size_t budget = opts.budget ? opts.budget : opts.pop_size * opts.generations;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  TuneResult out;
  auto evaluate = [&](const std::vector<std::vector<double>>& batch) {
    std::vector<std::vector<double>> todo(batch.begin(),
                                          batch.begin() + static_cast<std::ptrdiff_t>(std::min(
                                                              batch.size(), budget - out.trace.size())));
    auto evals = parallel_map(todo.size(), opts.threads, [&](std::size_t i) { return objective(todo[i]); });
    for (const auto& e : evals) {
      if (out.trace.empty() || e.objective < out.best.objective) out.best = e;
      out.trace.push_back(e);
    }
    return evals;
  };

  std::vector<std::vector<double>> pop;
  if (!baseline.empty()) pop.push_back(clip(baseline, bounds));
  while (pop.size() < opts.pop_size) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = bounds[i].lower + unit(rng) * (bounds[i].upper - bounds[i].lower);
    pop.push_back(std::move(p));
  }
  if (budget == 0) return out;
  auto records = evaluate(pop);
  pop.resize(records.size());

  for (std::size_t gen = 1; gen < opts.generations && out.trace.size() < budget && pop.size() >= 2; ++gen) {
    std::vector<double> fitness;
    for (const auto& r : records) fitness.push_back(r.objective);
    std::uniform_int_distribution<std::size_t> pick_live(0, pop.size() - 1);
    auto select = [&] {
      std::vector<std::size_t> contestants(std::max<std::size_t>(opts.tournament_size, 1));
      for (auto& c : contestants) c = pick_live(rng);
      return tournament_winner(fitness, contestants);
    };
    const std::size_t elite = tournament_winner(fitness, [&] {
      std::vector<std::size_t> all(pop.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      return all;
    }());

    std::vector<std::vector<double>> children;
    while (children.size() + 1 < opts.pop_size) {
      const auto& a = pop[select()];
      const auto& b = pop[select()];
      std::vector<double> child = a;
      if (unit(rng) < opts.crossover_rate) {
        const double alpha = unit(rng);
        for (std::size_t i = 0; i < n; ++i) child[i] = alpha * a[i] + (1.0 - alpha) * b[i];
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (unit(rng) < opts.mutation_rate) {
          child[i] += gauss(rng) * opts.mutation_sigma * (bounds[i].upper - bounds[i].lower);
        }
      }
      children.push_back(clip(std::move(child), bounds));
    }
    auto child_records = evaluate(children);
    children.resize(child_records.size());

    std::vector<std::vector<double>> next{pop[elite]};
    std::vector<MbbfRecord> next_records{records[elite]};
    for (std::size_t i = 0; i < children.size(); ++i) {
      next.push_back(std::move(children[i]));
      next_records.push_back(std::move(child_records[i]));
    }
    pop = std::move(next);
    records = std::move(next_records);
  }
  return out;
}

AlgorithmResult run_pamso(const CapacityInstance& cap, const PamsoOptions& opts, TuneResult* trace_out) {
  cap.validate();
  const std::vector<ParamBounds> bounds = opts.bounds.empty() ? default_pamso_bounds(cap) : opts.bounds;
  const std::vector<double> start = unit_params(cap);
  MbbfObjective objective = [&](const std::vector<double>& rho) { return evaluate_mbbf(cap, rho, opts.mbbf); };

  TuneResult tuned;
  if (opts.dfo == DfoBackend::PatternSearch) {
    PatternSearchOptions ps;
    ps.budget = opts.budget;
    ps.threads = opts.threads;
    tuned = tune_pattern_search(objective, start, bounds, ps);
  } else {
    GeneticOptions ga = opts.genetic;
    ga.seed = opts.seed;
    ga.budget = opts.budget;
    ga.threads = opts.threads;
    // the elite is carried over, so later generations cost pop_size - 1
    const std::size_t per_gen = ga.pop_size > 1 ? ga.pop_size - 1 : 1;
    const std::size_t needed = opts.budget > ga.pop_size ? 1 + (opts.budget - ga.pop_size + per_gen - 1) / per_gen : 1;
    ga.generations = std::max(ga.generations, needed);
    tuned = tune_genetic(objective, bounds, start, ga);
  }

  AlgorithmResult res;
  double mm = -kInf;
  if (opts.compute_mm) mm = compute_mm(lower_capacity(cap), opts.mbbf.lp);
  double best = kInf;
  for (std::size_t i = 0; i < tuned.trace.size(); ++i) {
    best = std::min(best, tuned.trace[i].objective);
    res.log.record(i + 1, mm, best);
  }
  res.iterations = tuned.trace.size();
  res.lower_bound = mm;
  res.upper_bound = tuned.best.objective;
  res.objective = tuned.best.objective;
  res.x = tuned.best.x;
  res.y = tuned.best.y;
  res.status = tuned.best.feasible ? AlgorithmStatus::Converged : AlgorithmStatus::Infeasible;
  if (!tuned.best.feasible) res.warnings.push_back("no parameter setting produced a feasible design");
  if (trace_out) *trace_out = std::move(tuned);
  return res;
}

}  // namespace msopt
