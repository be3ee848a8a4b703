#include "msopt/benders.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msopt/error.hpp"
#include "msopt/parallel.hpp"

namespace msopt {

double BendersCut::slack(std::span<const double> x, double z) const {
  double lhs = kind == CutKind::Optimality ? z : 0.0;
  for (std::size_t k = 0; k < x_coeffs.size(); ++k) lhs += x_coeffs[k] * x[k];
  return lhs - constant;
}

LinearProgram build_master(const MultiScaleInstance& inst, const std::vector<BendersCut>& cuts, double big_m) {
  if (!(big_m > 0.0)) throw InvalidProblem("big_m must be positive");
  const std::size_t nx = inst.num_x();
  LinearProgram lp;
  for (std::size_t k = 0; k < nx; ++k) lp.add_variable(inst.first_stage.c[k], inst.x_bound(k));
  for (std::size_t s = 0; s < inst.num_subperiods(); ++s) lp.add_variable(1.0, {-kInf, kInf});
  for (const Row& r : inst.first_stage.rows) lp.rows.push_back(r);
  for (std::size_t s = 0; s < inst.num_subperiods(); ++s) lp.add_row({{nx + s, 1.0}}, Sense::GE, -big_m);
  for (const BendersCut& cut : cuts) {
    std::vector<Term> coeffs;
    for (std::size_t k = 0; k < nx; ++k) {
      if (cut.x_coeffs[k] != 0.0) coeffs.push_back({k, cut.x_coeffs[k]});
    }
    if (cut.kind == CutKind::Optimality) coeffs.push_back({nx + cut.subperiod, 1.0});
    lp.add_row(std::move(coeffs), Sense::GE, cut.constant);
  }
  return lp;
}

namespace {

// Subproblem over y_s with the x part moved to the right-hand side.
LinearProgram build_subproblem(const MultiScaleInstance& inst, std::size_t s, std::span<const double> x_star) {
  const auto& sp = inst.subperiods[s];
  const auto q = inst.effective_q(s);
  LinearProgram lp;
  for (std::size_t j = 0; j < sp.num_y(); ++j) lp.add_variable(q[j], inst.y_bound(s, j));
  for (const auto& r : sp.rows) {
    double rhs = r.rhs;
    for (const Term& t : r.x_coeffs) rhs -= t.value * x_star[t.index];
    lp.add_row(r.y_coeffs, r.sense, rhs);
  }
  return lp;
}

double clamp_sign(Sense sense, double v) {
  if (sense == Sense::LE) return std::min(v, 0.0);
  if (sense == Sense::GE) return std::max(v, 0.0);
  return v;
}

// Row multipliers p -> (T^T p, p^T h) for subperiod s.
void project_rows(const MultiScaleInstance& inst, std::size_t s, const std::vector<double>& p,
                  std::vector<double>& x_coeffs, double& ph) {
  const auto& sp = inst.subperiods[s];
  x_coeffs.assign(inst.num_x(), 0.0);
  ph = 0.0;
  for (std::size_t i = 0; i < sp.rows.size(); ++i) {
    ph += p[i] * sp.rows[i].rhs;
    for (const Term& t : sp.rows[i].x_coeffs) x_coeffs[t.index] += t.value * p[i];
  }
}

// W_s^T p
std::vector<double> w_transpose(const MultiScaleInstance& inst, std::size_t s, const std::vector<double>& p) {
  const auto& sp = inst.subperiods[s];
  std::vector<double> g(sp.num_y(), 0.0);
  for (std::size_t i = 0; i < sp.rows.size(); ++i) {
    for (const Term& t : sp.rows[i].y_coeffs) g[t.index] += t.value * p[i];
  }
  return g;
}

}  // namespace

SubproblemOutcome solve_subproblem(const MultiScaleInstance& inst, std::size_t s, std::span<const double> x_star,
                                   const LpOptions& lp_opts) {
  if (x_star.size() != inst.num_x()) throw DimensionMismatch("x_star has the wrong length");
  const auto& sp = inst.subperiods[s];
  const LinearProgram lp = build_subproblem(inst, s, x_star);
  const LpSolution sol = solve_lp(lp, lp_opts);

  if (sol.status == LpStatus::Unbounded) {
    throw SubproblemUnbounded("subproblem " + std::to_string(s) +
                              " is unbounded; the instance violates the bounded-recourse assumption");
  }
  if (sol.status == LpStatus::Optimal) {
    OptimalityCutData out;
    out.value = sol.objective;
    out.y = sol.primal;
    out.duals = sol.duals;
    for (std::size_t i = 0; i < sp.rows.size(); ++i) out.duals[i] = clamp_sign(sp.rows[i].sense, out.duals[i]);
    BendersCut& cut = out.cut;
    cut.kind = CutKind::Optimality;
    cut.subperiod = s;
    cut.ray_or_point = out.duals;
    double ph = 0.0;
    project_rows(inst, s, out.duals, cut.x_coeffs, ph);
    // min over the y box of the reduced costs
    const auto q = inst.effective_q(s);
    const auto g = w_transpose(inst, s, out.duals);
    double bound_terms = 0.0;
    for (std::size_t j = 0; j < sp.num_y(); ++j) {
      const double d = q[j] - g[j];
      if (std::abs(d) <= lp_opts.tol_opt * (1.0 + std::abs(q[j]))) continue;
      const auto b = inst.y_bound(s, j);
      const double at = d > 0.0 ? b.lower : b.upper;
      if (std::isfinite(at)) bound_terms += d * at;
    }
    cut.constant = ph + bound_terms;
    return out;
  }

  FeasibilityCutData out;
  out.ray = sol.farkas_ray;
  double scale = 0.0;
  for (double v : out.ray) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < sp.rows.size(); ++i) out.ray[i] = clamp_sign(sp.rows[i].sense, out.ray[i]);
  BendersCut& cut = out.cut;
  cut.kind = CutKind::Feasibility;
  cut.subperiod = s;
  cut.ray_or_point = out.ray;
  double wh = 0.0;
  project_rows(inst, s, out.ray, cut.x_coeffs, wh);
  // max over the y box of (W^T w)^T y
  const auto g = w_transpose(inst, s, out.ray);
  double box_max = 0.0;
  for (std::size_t j = 0; j < sp.num_y(); ++j) {
    if (std::abs(g[j]) <= lp_opts.tol_feas * scale) continue;
    const auto b = inst.y_bound(s, j);
    const double at = g[j] > 0.0 ? b.upper : b.lower;
    if (std::isfinite(at)) box_max += g[j] * at;
  }
  cut.constant = wh - box_max;
  return out;
}

AlgorithmResult run_benders(const MultiScaleInstance& inst, const BendersOptions& opts,
                            std::vector<BendersCut>* cuts_out) {
  inst.validate();
  const std::size_t nx = inst.num_x();
  const std::size_t ns = inst.num_subperiods();
  AlgorithmResult res;
  std::vector<BendersCut> cuts;
  double lb = -kInf;
  std::vector<double> z;

  for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
    const LinearProgram master = build_master(inst, cuts, opts.big_m);
    const LpSolution msol = solve_lp(master, opts.lp);
    res.iterations = iter;
    if (msol.status == LpStatus::Infeasible) {
      res.status = AlgorithmStatus::Infeasible;
      res.warnings.push_back("master problem is infeasible");
      break;
    }
    if (msol.status == LpStatus::Unbounded) {
      res.status = AlgorithmStatus::Unbounded;
      res.warnings.push_back("master problem is unbounded in x");
      break;
    }
    lb = std::max(lb, msol.objective);
    const std::vector<double> x(msol.primal.begin(), msol.primal.begin() + static_cast<std::ptrdiff_t>(nx));
    z.assign(msol.primal.begin() + static_cast<std::ptrdiff_t>(nx), msol.primal.end());

    const auto outcomes = parallel_map(ns, opts.threads, [&](std::size_t s) {
      return solve_subproblem(inst, s, x, opts.lp);
    });

    bool all_feasible = true;
    double candidate = 0.0;
    for (std::size_t k = 0; k < nx; ++k) candidate += inst.first_stage.c[k] * x[k];
    std::size_t added = 0;
    for (std::size_t s = 0; s < ns; ++s) {
      if (const auto* opt = std::get_if<OptimalityCutData>(&outcomes[s])) {
        candidate += opt->value;
        if (opt->value > z[s] + opts.tol * (1.0 + std::abs(opt->value))) {
          cuts.push_back(opt->cut);
          ++added;
        }
      } else {
        all_feasible = false;
        cuts.push_back(std::get<FeasibilityCutData>(outcomes[s]).cut);
        ++added;
      }
    }
    if (all_feasible && candidate < res.upper_bound) {
      res.upper_bound = candidate;
      res.x = x;
      res.y.clear();
      for (const auto& o : outcomes) res.y.push_back(std::get<OptimalityCutData>(o).y);
    }
    res.lower_bound = lb;
    res.log.record(iter, lb, res.upper_bound);

    if (gap_closed(lb, res.upper_bound, opts.tol) || (added == 0 && all_feasible)) {
      res.status = AlgorithmStatus::Converged;
      break;
    }
  }

  if (res.status == AlgorithmStatus::Converged) {
    res.objective = res.upper_bound;
    for (std::size_t s = 0; s < z.size(); ++s) {
      if (z[s] <= -opts.big_m * (1.0 - 1e-9)) {
        res.warnings.push_back("z_" + std::to_string(s) + " rests at -big_m; big_m may be too small");
      }
    }
  } else if (std::isfinite(res.upper_bound)) {
    res.objective = res.upper_bound;
  }
  if (cuts_out) *cuts_out = std::move(cuts);
  return res;
}

}  // namespace msopt
