#pragma once
// Lagrangian decomposition of the variable-split model: every subperiod owns
// a copy x_s of the first-stage vector, and the copies are tied to x_1 by
// nonanticipativity rows x_1 = x_s whose multipliers are nu_s.

#include <optional>
#include <vector>

#include "msopt/lp.hpp"
#include "msopt/model.hpp"

namespace msopt {

// nu[s-1][k] for s = 1..S-1 (block 0 carries no multiplier of its own).
using Multipliers = std::vector<std::vector<double>>;

Multipliers zero_multipliers(const MultiScaleInstance& inst);

struct BlockSolution {
  std::vector<double> x;
  std::vector<double> y;
  double objective = 0.0;  // including the nu terms
  double cost = 0.0;       // c^T x / |S| + w_s q_s^T y, without nu terms
};

struct DualEvaluation {
  double value = 0.0;
  std::vector<BlockSolution> blocks;
};

// x cost vector of block s under nu: c/|S| + sum nu_s for block 0,
// c/|S| - nu_s otherwise.
std::vector<double> block_x_costs(const MultiScaleInstance& inst, const Multipliers& nu, std::size_t s);

// Throws SubproblemUnbounded, InfeasibleInstance.
DualEvaluation evaluate_dual(const MultiScaleInstance& inst, const Multipliers& nu, double x_upper = 1e6,
                             std::size_t threads = 1, const LpOptions& lp_opts = {});

// nullopt signals a zero subgradient (all copies agree). When v_star is not
// finite the step falls back to 1 / (k * ||g||).
std::optional<Multipliers> subgradient_step(const Multipliers& nu, const std::vector<std::vector<double>>& xs,
                                            double v_star, double v_k, std::size_t k = 1);

struct CuttingPlaneStep {
  Multipliers nu;
  double value = 0.0;  // master optimum, an upper model of the dual function
  // Per block, convex weights over the history entries (from the cut duals).
  std::vector<std::vector<double>> weights;
};

// max sum eta_s over the recorded block solutions, nu boxed to +-nu_box.
// Throws MasterInfeasible.
CuttingPlaneStep cutting_plane_update(const MultiScaleInstance& inst, const std::vector<DualEvaluation>& history,
                                      double nu_box, const LpOptions& lp_opts = {});

struct HeuristicResult {
  double value = kInf;
  std::vector<double> x;
  std::vector<std::vector<double>> y;
};

// Best fixed-x full-space value over the candidates; infeasible ones count as +inf.
HeuristicResult ub_heuristic(const MultiScaleInstance& inst, const std::vector<std::vector<double>>& candidates,
                             std::size_t threads = 1, const LpOptions& lp_opts = {});

enum class LagrangianMethod { Subgradient, CuttingPlane };

struct LagrangianOptions {
  LagrangianMethod method = LagrangianMethod::CuttingPlane;
  double tol = 1e-6;
  std::size_t max_iter = 100;
  double nu_box = 1e6;
  double x_upper = 1e6;
  double repeat_tol = 1e-9;
  std::size_t threads = 1;
  LpOptions lp;
};

AlgorithmResult run_lagrangian(const MultiScaleInstance& inst, const LagrangianOptions& opts = {});

}  // namespace msopt
