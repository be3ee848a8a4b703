#pragma once
// Multi-cut Benders decomposition over MultiScaleInstance.

#include <span>
#include <variant>
#include <vector>

#include "msopt/lp.hpp"
#include "msopt/model.hpp"

namespace msopt {

enum class CutKind { Feasibility, Optimality };

// Optimality:  z_s + x_coeffs . x >= constant
// Feasibility:       x_coeffs . x >= constant
// constant folds p^T h_s together with the y-bound terms of the dual.
struct BendersCut {
  CutKind kind = CutKind::Optimality;
  std::size_t subperiod = 0;
  std::vector<double> ray_or_point;  // row multipliers of the subproblem
  double constant = 0.0;
  std::vector<double> x_coeffs;      // T_s^T p

  // Left side minus right side at (x, z_s); nonnegative when satisfied.
  double slack(std::span<const double> x, double z) const;
};

struct OptimalityCutData {
  std::vector<double> duals;
  double value = 0.0;
  std::vector<double> y;
  BendersCut cut;
};

struct FeasibilityCutData {
  std::vector<double> ray;
  BendersCut cut;
};

using SubproblemOutcome = std::variant<OptimalityCutData, FeasibilityCutData>;

struct BendersOptions {
  double tol = 1e-6;
  std::size_t max_iter = 100;
  double big_m = 1e7;
  std::size_t threads = 1;
  LpOptions lp;
};

// Variables (x, z_1..z_S); objective c^T x + sum z_s.
LinearProgram build_master(const MultiScaleInstance& inst, const std::vector<BendersCut>& cuts, double big_m);

// min w_s q_s^T y  s.t.  W_s y (sense) h_s - T_s x_star. Throws SubproblemUnbounded.
SubproblemOutcome solve_subproblem(const MultiScaleInstance& inst, std::size_t s, std::span<const double> x_star,
                                   const LpOptions& lp_opts = {});

// `cuts`, when given, receives every cut added to the master.
AlgorithmResult run_benders(const MultiScaleInstance& inst, const BendersOptions& opts = {},
                            std::vector<BendersCut>* cuts = nullptr);

}  // namespace msopt
