#include "msopt/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msopt/error.hpp"
#include "msopt/parallel.hpp"

namespace msopt {

Multipliers zero_multipliers(const MultiScaleInstance& inst) {
  const std::size_t ns = inst.num_subperiods();
  return Multipliers(ns > 0 ? ns - 1 : 0, std::vector<double>(inst.num_x(), 0.0));
}

std::vector<double> block_x_costs(const MultiScaleInstance& inst, const Multipliers& nu, std::size_t s) {
  const double share = 1.0 / static_cast<double>(inst.num_subperiods());
  std::vector<double> costs(inst.num_x());
  for (std::size_t k = 0; k < costs.size(); ++k) costs[k] = inst.first_stage.c[k] * share;
  if (s == 0) {
    for (const auto& v : nu) {
      for (std::size_t k = 0; k < costs.size(); ++k) costs[k] += v[k];
    }
  } else {
    for (std::size_t k = 0; k < costs.size(); ++k) costs[k] -= nu[s - 1][k];
  }
  return costs;
}

DualEvaluation evaluate_dual(const MultiScaleInstance& inst, const Multipliers& nu, double x_upper,
                             std::size_t threads, const LpOptions& lp_opts) {
  const std::size_t nx = inst.num_x();
  const std::size_t ns = inst.num_subperiods();
  if (nu.size() + 1 != ns) throw DimensionMismatch("multipliers need one vector per non-first subperiod");
  for (const auto& v : nu) {
    if (v.size() != nx) throw DimensionMismatch("multiplier vector has the wrong length");
  }
  const double share = 1.0 / static_cast<double>(ns);

  DualEvaluation ev;
  ev.blocks = parallel_map(ns, threads, [&](std::size_t s) {
    const LinearProgram lp = build_block(inst, s, block_x_costs(inst, nu, s), x_upper);
    const LpSolution sol = solve_lp(lp, lp_opts);
    if (sol.status == LpStatus::Unbounded) {
      throw SubproblemUnbounded("Lagrangian block " + std::to_string(s) + " is unbounded");
    }
    if (sol.status == LpStatus::Infeasible) {
      throw InfeasibleInstance("Lagrangian block " + std::to_string(s) + " is infeasible");
    }
    BlockSolution b;
    b.x.assign(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(nx));
    b.y.assign(sol.primal.begin() + static_cast<std::ptrdiff_t>(nx), sol.primal.end());
    b.objective = sol.objective;
    const auto q = inst.effective_q(s);
    for (std::size_t k = 0; k < nx; ++k) b.cost += inst.first_stage.c[k] * share * b.x[k];
    for (std::size_t j = 0; j < q.size(); ++j) b.cost += q[j] * b.y[j];
    return b;
  });
  for (const auto& b : ev.blocks) ev.value += b.objective;
  return ev;
}

std::optional<Multipliers> subgradient_step(const Multipliers& nu, const std::vector<std::vector<double>>& xs,
                                            double v_star, double v_k, std::size_t k) {
  if (xs.size() != nu.size() + 1) throw DimensionMismatch("need one x copy per subperiod");
  double denom = 0.0;
  for (std::size_t s = 1; s < xs.size(); ++s) {
    for (std::size_t i = 0; i < xs[0].size(); ++i) {
      const double g = xs[0][i] - xs[s][i];
      denom += g * g;
    }
  }
  if (denom == 0.0) return std::nullopt;
  double lambda = 0.0;
  if (std::isfinite(v_star)) {
    lambda = std::max(0.0, (v_star - v_k) / denom);
  } else {
    lambda = 1.0 / (static_cast<double>(std::max<std::size_t>(k, 1)) * std::sqrt(denom));
  }
  Multipliers next = nu;
  for (std::size_t s = 1; s < xs.size(); ++s) {
    for (std::size_t i = 0; i < xs[0].size(); ++i) next[s - 1][i] += lambda * (xs[0][i] - xs[s][i]);
  }
  return next;
}

CuttingPlaneStep cutting_plane_update(const MultiScaleInstance& inst, const std::vector<DualEvaluation>& history,
                                      double nu_box, const LpOptions& lp_opts) {
  if (history.empty()) throw InvalidProblem("cutting-plane master needs at least one evaluation");
  const std::size_t nx = inst.num_x();
  const std::size_t ns = inst.num_subperiods();
  const std::size_t n_nu = (ns - 1) * nx;
  LinearProgram lp;
  // nu_s[k] at (s-1)*nx + k, eta_s at n_nu + s
  for (std::size_t i = 0; i < n_nu; ++i) lp.add_variable(0.0, {-nu_box, nu_box});
  for (std::size_t s = 0; s < ns; ++s) lp.add_variable(-1.0, {-kInf, kInf});
  for (const auto& ev : history) {
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& b = ev.blocks[s];
      std::vector<Term> coeffs{{n_nu + s, 1.0}};
      for (std::size_t k = 0; k < nx; ++k) {
        if (b.x[k] == 0.0) continue;
        if (s == 0) {
          for (std::size_t t = 1; t < ns; ++t) coeffs.push_back({(t - 1) * nx + k, -b.x[k]});
        } else {
          coeffs.push_back({(s - 1) * nx + k, b.x[k]});
        }
      }
      lp.add_row(std::move(coeffs), Sense::LE, b.cost);
    }
  }
  const LpSolution sol = solve_lp(lp, lp_opts);
  if (!sol.optimal()) throw MasterInfeasible("cutting-plane master is " + std::string(to_string(sol.status)));

  CuttingPlaneStep step;
  step.value = -sol.objective;
  step.nu = zero_multipliers(inst);
  for (std::size_t s = 1; s < ns; ++s) {
    for (std::size_t k = 0; k < nx; ++k) step.nu[s - 1][k] = sol.primal[(s - 1) * nx + k];
  }
  step.weights.assign(ns, std::vector<double>(history.size(), 0.0));
  for (std::size_t s = 0; s < ns; ++s) {
    double total = 0.0;
    for (std::size_t h = 0; h < history.size(); ++h) {
      const double mu = std::max(0.0, -sol.duals[h * ns + s]);
      step.weights[s][h] = mu;
      total += mu;
    }
    if (total > 0.0) {
      for (double& w : step.weights[s]) w /= total;
    } else {
      step.weights[s].back() = 1.0;
    }
  }
  return step;
}

HeuristicResult ub_heuristic(const MultiScaleInstance& inst, const std::vector<std::vector<double>>& candidates,
                             std::size_t threads, const LpOptions& lp_opts) {
  const auto solved = parallel_map(candidates.size(), threads, [&](std::size_t i) {
    std::vector<double> x = candidates[i];
    for (std::size_t k = 0; k < x.size(); ++k) {
      const auto b = inst.x_bound(k);
      x[k] = std::clamp(x[k], b.lower, b.upper);
    }
    return solve_fixed_x(inst, x, lp_opts);
  });
  HeuristicResult best;
  for (const auto& s : solved) {
    if (s && s->objective < best.value) {
      best.value = s->objective;
      best.x = s->x;
      best.y = s->y;
    }
  }
  return best;
}

namespace {

void push_unique(std::vector<std::vector<double>>& out, const std::vector<double>& x) {
  if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
}

double max_change(const Multipliers& a, const Multipliers& b) {
  double m = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (std::size_t k = 0; k < a[s].size(); ++k) m = std::max(m, std::abs(a[s][k] - b[s][k]));
  }
  return m;
}

}  // namespace

AlgorithmResult run_lagrangian(const MultiScaleInstance& inst, const LagrangianOptions& opts) {
  inst.validate();
  const std::size_t nx = inst.num_x();
  const bool cutting_plane = opts.method == LagrangianMethod::CuttingPlane;
  AlgorithmResult res;
  Multipliers nu = zero_multipliers(inst);
  std::vector<DualEvaluation> history;
  std::vector<double> ergodic(nx, 0.0);
  bool stalled = false;

  for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
    res.iterations = iter;
    DualEvaluation ev = evaluate_dual(inst, nu, opts.x_upper, opts.threads, opts.lp);
    res.lower_bound = std::max(res.lower_bound, ev.value);

    std::vector<std::vector<double>> candidates;
    for (const auto& b : ev.blocks) push_unique(candidates, b.x);

    std::optional<Multipliers> next;
    if (cutting_plane) {
      history.push_back(ev);
      CuttingPlaneStep step = cutting_plane_update(inst, history, opts.nu_box, opts.lp);
      std::vector<double> recovered(nx, 0.0);
      for (std::size_t h = 0; h < history.size(); ++h) {
        for (std::size_t k = 0; k < nx; ++k) recovered[k] += step.weights[0][h] * history[h].blocks[0].x[k];
      }
      push_unique(candidates, recovered);
      next = std::move(step.nu);
    } else {
      const double inv = 1.0 / static_cast<double>(iter);
      for (std::size_t k = 0; k < nx; ++k) ergodic[k] += (ev.blocks[0].x[k] - ergodic[k]) * inv;
      push_unique(candidates, ergodic);
    }

    HeuristicResult h = ub_heuristic(inst, candidates, opts.threads, opts.lp);
    if (h.value < res.upper_bound) {
      res.upper_bound = h.value;
      res.x = std::move(h.x);
      res.y = std::move(h.y);
    }
    res.log.record(iter, res.lower_bound, res.upper_bound);
    if (gap_closed(res.lower_bound, res.upper_bound, opts.tol)) {
      res.status = AlgorithmStatus::Converged;
      break;
    }

    if (cutting_plane) {
      if (max_change(*next, nu) <= opts.repeat_tol) {
        stalled = true;
        break;
      }
    } else {
      std::vector<std::vector<double>> xs;
      for (const auto& b : ev.blocks) xs.push_back(b.x);
      next = subgradient_step(nu, xs, res.upper_bound, ev.value, iter);
      if (!next) {
        stalled = true;
        break;
      }
    }
    nu = std::move(*next);
  }

  if (res.status != AlgorithmStatus::Converged && stalled) {
    res.warnings.push_back(cutting_plane ? "multipliers repeated with the gap still open"
                                         : "zero subgradient with the gap still open");
  }
  if (std::isfinite(res.upper_bound)) res.objective = res.upper_bound;
  return res;
}

}  // namespace msopt
