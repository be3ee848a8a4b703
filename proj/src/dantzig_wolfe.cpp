#include "msopt/dantzig_wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msopt/error.hpp"
#include "msopt/parallel.hpp"

namespace msopt {

std::size_t rmp_num_nac_rows(const MultiScaleInstance& inst) {
  return (inst.num_subperiods() - 1) * inst.num_x();
}

LinearProgram build_rmp(const MultiScaleInstance& inst, const std::vector<Column>& columns, double artificial_cost) {
  if (!(artificial_cost > 0.0)) throw InvalidProblem("artificial_cost must be positive");
  const std::size_t nx = inst.num_x();
  const std::size_t ns = inst.num_subperiods();
  const std::size_t nac = rmp_num_nac_rows(inst);

  std::vector<std::vector<Term>> rows(nac + ns);
  LinearProgram lp;
  for (const Column& col : columns) {
    const std::size_t v = lp.add_variable(col.cost_part);
    for (std::size_t k = 0; k < nx; ++k) {
      const double xk = col.x_part[k];
      if (xk == 0.0) continue;
      if (col.subperiod == 0) {
        for (std::size_t s = 1; s < ns; ++s) rows[(s - 1) * nx + k].push_back({v, xk});
      } else {
        rows[(col.subperiod - 1) * nx + k].push_back({v, -xk});
      }
    }
    if (col.kind == ColumnKind::ExtremePoint) rows[nac + col.subperiod].push_back({v, 1.0});
  }
  for (std::size_t i = 0; i < nac; ++i) {
    rows[i].push_back({lp.add_variable(artificial_cost), 1.0});
    rows[i].push_back({lp.add_variable(artificial_cost), -1.0});
  }
  for (std::size_t s = 0; s < ns; ++s) rows[nac + s].push_back({lp.add_variable(artificial_cost), 1.0});
  for (std::size_t i = 0; i < nac; ++i) lp.add_row(std::move(rows[i]), Sense::EQ, 0.0);
  for (std::size_t s = 0; s < ns; ++s) lp.add_row(std::move(rows[nac + s]), Sense::EQ, 1.0);
  return lp;
}

PricingResult price(const MultiScaleInstance& inst, std::size_t s, const std::vector<std::vector<double>>& nu,
                    double r_dual, double x_upper, double tol, const LpOptions& lp_opts) {
  const std::size_t nx = inst.num_x();
  const std::size_t ns = inst.num_subperiods();
  const double share = 1.0 / static_cast<double>(ns);
  std::vector<double> costs(nx);
  for (std::size_t k = 0; k < nx; ++k) costs[k] = inst.first_stage.c[k] * share;
  if (s == 0) {
    for (const auto& v : nu) {
      for (std::size_t k = 0; k < nx; ++k) costs[k] -= v[k];
    }
  } else {
    for (std::size_t k = 0; k < nx; ++k) costs[k] += nu[s - 1][k];
  }
  const LinearProgram lp = build_block(inst, s, costs, x_upper);
  const LpSolution sol = solve_lp(lp, lp_opts);
  if (sol.status == LpStatus::Infeasible) {
    throw InfeasibleInstance("pricing block " + std::to_string(s) + " is infeasible");
  }

  const auto q = inst.effective_q(s);
  const std::vector<double>& v = sol.status == LpStatus::Optimal ? sol.primal : sol.primal_ray;
  Column col;
  col.subperiod = s;
  col.x_part.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(nx));
  col.y_part.assign(v.begin() + static_cast<std::ptrdiff_t>(nx), v.end());
  for (std::size_t k = 0; k < nx; ++k) col.cost_part += inst.first_stage.c[k] * share * col.x_part[k];
  for (std::size_t j = 0; j < q.size(); ++j) col.cost_part += q[j] * col.y_part[j];

  PricingResult out;
  if (sol.status == LpStatus::Unbounded) {
    col.kind = ColumnKind::ExtremeRay;
    out.value = -kInf;
    out.column = std::move(col);
    return out;
  }
  out.value = sol.objective;
  if (out.value < r_dual - tol * (1.0 + std::abs(r_dual))) out.column = std::move(col);
  return out;
}

AlgorithmResult run_dw(const MultiScaleInstance& inst, const DwOptions& opts) {
  inst.validate();
  const std::size_t nx = inst.num_x();
  const std::size_t ns = inst.num_subperiods();
  const std::size_t nac = rmp_num_nac_rows(inst);
  AlgorithmResult res;
  std::vector<Column> columns;
  bool artificials_zero = false;

  for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
    res.iterations = iter;
    const LinearProgram rmp = build_rmp(inst, columns, opts.artificial_cost);
    const LpSolution sol = solve_lp(rmp, opts.lp);
    if (!sol.optimal()) {
      res.status = sol.status == LpStatus::Unbounded ? AlgorithmStatus::Unbounded : AlgorithmStatus::Infeasible;
      res.warnings.push_back("restricted master is " + std::string(to_string(sol.status)));
      break;
    }
    double artificial = 0.0;
    for (std::size_t v = columns.size(); v < rmp.num_vars(); ++v) artificial += sol.primal[v];
    artificials_zero = artificial <= opts.tol;
    if (artificials_zero && sol.objective < res.upper_bound) {
      res.upper_bound = sol.objective;
      res.x.assign(nx, 0.0);
      res.y.assign(ns, {});
      for (std::size_t s = 0; s < ns; ++s) res.y[s].assign(inst.subperiods[s].num_y(), 0.0);
      for (std::size_t c = 0; c < columns.size(); ++c) {
        const Column& col = columns[c];
        const double w = sol.primal[c];
        if (w == 0.0) continue;
        if (col.subperiod == 0) {
          for (std::size_t k = 0; k < nx; ++k) res.x[k] += w * col.x_part[k];
        }
        for (std::size_t j = 0; j < col.y_part.size(); ++j) res.y[col.subperiod][j] += w * col.y_part[j];
      }
    }

    std::vector<std::vector<double>> nu(ns - 1, std::vector<double>(nx));
    for (std::size_t s = 1; s < ns; ++s) {
      for (std::size_t k = 0; k < nx; ++k) nu[s - 1][k] = sol.duals[(s - 1) * nx + k];
    }
    const auto priced = parallel_map(ns, opts.threads, [&](std::size_t s) {
      return price(inst, s, nu, sol.duals[nac + s], opts.x_upper, opts.tol, opts.lp);
    });

    double lb = 0.0;
    std::size_t added = 0;
    for (const auto& p : priced) {
      lb += p.value;
      if (p.column && std::find(columns.begin(), columns.end(), *p.column) == columns.end()) {
        columns.push_back(*p.column);
        ++added;
      }
    }
    res.lower_bound = std::max(res.lower_bound, lb);
    res.log.record(iter, res.lower_bound, res.upper_bound);

    if (added == 0 || (artificials_zero && gap_closed(res.lower_bound, res.upper_bound, opts.tol))) {
      res.status = artificials_zero ? AlgorithmStatus::Converged : AlgorithmStatus::ArtificialsNonzero;
      break;
    }
  }

  if (res.status == AlgorithmStatus::ArtificialsNonzero) {
    res.warnings.push_back("artificial variables remain positive; raise x_upper or artificial_cost");
  }
  if (std::isfinite(res.upper_bound)) res.objective = res.upper_bound;
  return res;
}

}  // namespace msopt
