#include <algorithm>
#include <cmath>
#include <string>

#include "msopt/error.hpp"
#include "msopt/lp.hpp"

namespace msopt {
namespace {

struct Checker {
  CertificateVerdict verdict;

  // Records the first violation only.
  bool fail(std::string condition, double magnitude) {
    if (verdict.valid) {
      verdict.valid = false;
      verdict.condition = std::move(condition);
      verdict.magnitude = magnitude;
    }
    return false;
  }
};

double row_activity(const Row& row, const std::vector<double>& x) {
  double a = 0.0;
  for (const Term& t : row.coeffs) a += t.value * x[t.index];
  return a;
}

// g = A^T y
std::vector<double> transpose_times(const LinearProgram& lp, const std::vector<double>& y) {
  std::vector<double> g(lp.num_vars(), 0.0);
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    for (const Term& t : lp.rows[i].coeffs) g[t.index] += t.value * y[i];
  }
  return g;
}

bool row_sign_ok(Sense s, double y, double tol) {
  switch (s) {
    case Sense::LE: return y <= tol;
    case Sense::GE: return y >= -tol;
    case Sense::EQ: return true;
  }
  return true;
}

void check_optimal(const LinearProgram& lp, const LpSolution& sol, double tol, Checker& ck) {
  const auto& x = sol.primal;
  const auto& y = sol.duals;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const auto& b = lp.bounds[j];
    const double scale = 1.0 + std::max(std::isfinite(b.lower) ? std::abs(b.lower) : 0.0,
                                        std::isfinite(b.upper) ? std::abs(b.upper) : 0.0);
    const double viol = std::max(b.lower - x[j], x[j] - b.upper);
    if (viol > tol * scale) ck.fail("primal feasibility: bound of variable " + std::to_string(j), viol);
  }
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const Row& row = lp.rows[i];
    const double act = row_activity(row, x);
    double viol = 0.0;
    switch (row.sense) {
      case Sense::LE: viol = act - row.rhs; break;
      case Sense::GE: viol = row.rhs - act; break;
      case Sense::EQ: viol = std::abs(act - row.rhs); break;
    }
    if (viol > tol * (1.0 + std::abs(row.rhs))) ck.fail("primal feasibility: row " + std::to_string(i), viol);
  }
  if (!ck.verdict.valid) return;

  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    if (!row_sign_ok(lp.rows[i].sense, y[i], tol)) {
      ck.fail("dual feasibility: sign of row dual " + std::to_string(i), std::abs(y[i]));
    }
  }
  const std::vector<double> g = transpose_times(lp, y);
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) dual_obj += y[i] * lp.rows[i].rhs;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const double d = lp.costs[j] - g[j];
    const double dtol = tol * (1.0 + std::abs(lp.costs[j]));
    const auto& b = lp.bounds[j];
    if (d > dtol) {
      if (!std::isfinite(b.lower)) {
        ck.fail("dual feasibility: reduced cost of variable " + std::to_string(j), d);
        continue;
      }
      dual_obj += d * b.lower;
    } else if (d < -dtol) {
      if (!std::isfinite(b.upper)) {
        ck.fail("dual feasibility: reduced cost of variable " + std::to_string(j), -d);
        continue;
      }
      dual_obj += d * b.upper;
    } else {
      dual_obj += d * x[j];
    }
  }
  if (!ck.verdict.valid) return;

  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const Row& row = lp.rows[i];
    const double gap = std::abs(y[i] * (row.rhs - row_activity(row, x)));
    if (gap > tol * (1.0 + std::abs(row.rhs)) * (1.0 + std::abs(y[i]))) {
      ck.fail("complementary slackness: row " + std::to_string(i), gap);
    }
  }
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const double d = lp.costs[j] - g[j];
    const auto& b = lp.bounds[j];
    double dist = 0.0;
    if (d > tol * (1.0 + std::abs(lp.costs[j]))) dist = x[j] - b.lower;
    else if (d < -tol * (1.0 + std::abs(lp.costs[j]))) dist = b.upper - x[j];
    if (std::abs(d * dist) > tol * (1.0 + std::abs(x[j])) * (1.0 + std::abs(d))) {
      ck.fail("complementary slackness: variable " + std::to_string(j), std::abs(d * dist));
    }
  }
  double primal_obj = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) primal_obj += lp.costs[j] * x[j];
  if (std::abs(primal_obj - sol.objective) > tol * (1.0 + std::abs(primal_obj))) {
    ck.fail("objective mismatch", std::abs(primal_obj - sol.objective));
  }
  const double gap = std::abs(primal_obj - dual_obj);
  if (gap > tol * (1.0 + std::abs(primal_obj))) ck.fail("strong duality", gap);
}

void check_infeasible(const LinearProgram& lp, const LpSolution& sol, double tol, Checker& ck) {
  const auto& y = sol.farkas_ray;
  double ynorm = 0.0;
  for (double v : y) ynorm = std::max(ynorm, std::abs(v));
  if (ynorm == 0.0) {
    ck.fail("farkas ray is zero", 0.0);
    return;
  }
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    if (!row_sign_ok(lp.rows[i].sense, y[i], tol * ynorm)) {
      ck.fail("farkas sign: row " + std::to_string(i), std::abs(y[i]));
    }
  }
  const std::vector<double> g = transpose_times(lp, y);
  // max over the bound box of g^T x; components below tol count as zero
  double box_max = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const auto& b = lp.bounds[j];
    if (std::abs(g[j]) <= tol * ynorm) continue;
    const double bound = g[j] > 0.0 ? b.upper : b.lower;
    if (!std::isfinite(bound)) {
      ck.fail("farkas cone: aggregated coefficient of variable " + std::to_string(j), std::abs(g[j]));
      return;
    }
    box_max += g[j] * bound;
  }
  double yb = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) yb += y[i] * lp.rows[i].rhs;
  const double margin = yb - box_max;
  if (!(margin > tol)) ck.fail("farkas margin", margin);
}

void check_unbounded(const LinearProgram& lp, const LpSolution& sol, double tol, Checker& ck) {
  const auto& d = sol.primal_ray;
  double dnorm = 0.0;
  for (double v : d) dnorm = std::max(dnorm, std::abs(v));
  if (dnorm == 0.0) {
    ck.fail("primal ray is zero", 0.0);
    return;
  }
  const double t = tol * dnorm;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const Row& row = lp.rows[i];
    const double a = row_activity(row, d);
    const bool ok = row.sense == Sense::LE ? a <= t : row.sense == Sense::GE ? a >= -t : std::abs(a) <= t;
    if (!ok) ck.fail("ray direction: row " + std::to_string(i), std::abs(a));
  }
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const auto& b = lp.bounds[j];
    if (std::isfinite(b.lower) && d[j] < -t) ck.fail("ray direction: lower bound of " + std::to_string(j), -d[j]);
    if (std::isfinite(b.upper) && d[j] > t) ck.fail("ray direction: upper bound of " + std::to_string(j), d[j]);
  }
  double cd = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) cd += lp.costs[j] * d[j];
  if (!(cd < -t)) ck.fail("ray improvement", cd);
}

}  // namespace

CertificateVerdict verify_certificate(const LinearProgram& lp, const LpSolution& sol, double tol) {
  Checker ck;
  switch (sol.status) {
    case LpStatus::Optimal:
      if (sol.primal.size() != lp.num_vars() || sol.duals.size() != lp.num_rows()) {
        throw ShapeMismatch("optimal solution dimensions disagree with the LP");
      }
      check_optimal(lp, sol, tol, ck);
      break;
    case LpStatus::Infeasible:
      if (sol.farkas_ray.size() != lp.num_rows()) throw ShapeMismatch("farkas ray length disagrees with row count");
      check_infeasible(lp, sol, tol, ck);
      break;
    case LpStatus::Unbounded:
      if (sol.primal_ray.size() != lp.num_vars()) throw ShapeMismatch("primal ray length disagrees with variable count");
      check_unbounded(lp, sol, tol, ck);
      break;
  }
  return ck.verdict;
}

}  // namespace msopt
