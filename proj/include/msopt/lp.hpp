#pragma once
// Dense bounded revised simplex with certified output.
//
// Sign convention for row duals (minimization): y_i <= 0 on LE rows,
// y_i >= 0 on GE rows, free on EQ rows, so that y_i = d(objective)/d(rhs_i).
// The same convention applies to Farkas rays: for every x inside the
// variable bounds that satisfies the rows, y^T A x >= y^T b. A ray proves
// infeasibility when max over the bound box of (A^T y)^T x < y^T b.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace msopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LE, GE, EQ };

std::string_view to_string(Sense s);

struct Term {
  std::size_t index;
  double value;
};

struct Row {
  std::vector<Term> coeffs;
  Sense sense = Sense::LE;
  double rhs = 0.0;
};

struct VarBounds {
  double lower = 0.0;
  double upper = kInf;
};

struct LinearProgram {
  std::vector<double> costs;
  std::vector<VarBounds> bounds;
  std::vector<Row> rows;
  std::vector<std::string> var_names;  // optional
  std::vector<std::string> row_names;  // optional

  std::size_t num_vars() const { return costs.size(); }
  std::size_t num_rows() const { return rows.size(); }

  std::size_t add_variable(double cost, VarBounds b = {});
  std::size_t add_row(std::vector<Term> coeffs, Sense sense, double rhs);

  // Throws InvalidProblem naming the first broken invariant.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;      // Optimal
  std::vector<double> duals;       // Optimal, one per row
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> farkas_ray;  // Infeasible, one per row
  std::vector<double> primal_ray;  // Unbounded, one per variable, max-norm 1
  std::size_t iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

struct LpOptions {
  double tol_feas = 1e-7;
  double tol_opt = 1e-9;
  std::size_t max_pivots = 0;   // 0: 200 * (n + m) + 1000
  std::size_t bland_after = 0;  // 0: 10 * (n + m)
  std::size_t refactor_every = 50;
};

// Throws MaxPivotsExceeded, NumericalBreakdown, InvalidProblem.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

struct CertificateVerdict {
  bool valid = true;
  std::string condition;  // first violated condition, empty when valid
  double magnitude = 0.0;

  explicit operator bool() const { return valid; }
};

// Checks the invariants of sol.status literally. Throws ShapeMismatch.
CertificateVerdict verify_certificate(const LinearProgram& lp, const LpSolution& sol,
                                      double tol = 1e-6);

// CPLEX-LP style text, for cross-checking with external solvers.
void write_lp_text(const LinearProgram& lp, std::ostream& os);

}  // namespace msopt
