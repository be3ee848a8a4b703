#pragma once
// Two-level instances: a first-stage block over x and independent subperiod
// blocks over (x, y_s), with no rows linking different subperiods.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msopt/lp.hpp"

namespace msopt {

struct FirstStage {
  std::vector<double> c;
  std::vector<Row> rows;            // coefficients index x
  std::vector<VarBounds> x_bounds;  // defaults to x >= 0 when empty
};

struct SubperiodRow {
  std::vector<Term> x_coeffs;
  std::vector<Term> y_coeffs;
  Sense sense = Sense::GE;
  double rhs = 0.0;
};

struct Subperiod {
  double weight = 1.0;
  std::vector<double> q;
  std::vector<SubperiodRow> rows;
  std::vector<VarBounds> y_bounds;  // defaults to y >= 0 when empty

  std::size_t num_y() const { return q.size(); }
};

struct MultiScaleInstance {
  FirstStage first_stage;
  std::vector<Subperiod> subperiods;
  std::string name;
  std::string description;

  std::size_t num_x() const { return first_stage.c.size(); }
  std::size_t num_subperiods() const { return subperiods.size(); }

  VarBounds x_bound(std::size_t k) const;
  VarBounds y_bound(std::size_t s, std::size_t j) const;

  // w_s * q_s: every algorithm works on the weight-folded costs.
  std::vector<double> effective_q(std::size_t s) const;

  // Throws DimensionMismatch / InvalidProblem.
  void validate() const;

  bool operator==(const MultiScaleInstance&) const;
};

bool operator==(const Row& a, const Row& b);
bool operator==(const SubperiodRow& a, const SubperiodRow& b);
inline bool operator==(const Term& a, const Term& b) { return a.index == b.index && a.value == b.value; }
inline bool operator==(const VarBounds& a, const VarBounds& b) { return a.lower == b.lower && a.upper == b.upper; }

// Generator capacity expansion: J generators, I parts of a day, S days.
struct CapacityInstance {
  std::size_t J = 0, I = 0, S = 0;
  std::vector<std::vector<std::vector<double>>> a;  // a[s][i][j] availability in [0, 1]
  std::vector<double> c;                            // c[j] amortized fixed cost per day
  std::vector<std::vector<double>> d;               // d[s][i] demand
  std::vector<std::vector<double>> f;               // f[i][j] operating cost
  std::vector<double> g;                            // g[s] purchase cost

  void validate() const;
  bool operator==(const CapacityInstance&) const = default;
};

enum class AlgorithmStatus { Converged, IterationLimit, Infeasible, Unbounded, ArtificialsNonzero };

std::string_view to_string(AlgorithmStatus s);

struct LogEntry {
  std::size_t iteration = 0;
  double lower_bound = -kInf;
  double upper_bound = kInf;
  double gap = kInf;
  std::int64_t wall_millis = 0;
};

class ConvergenceLog {
 public:
  ConvergenceLog() : start_(std::chrono::steady_clock::now()) {}

  // gap is ub - lb when both are finite, +inf otherwise.
  void record(std::size_t iteration, double lower_bound, double upper_bound);

  const std::vector<LogEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::chrono::steady_clock::time_point start_;
  std::vector<LogEntry> entries_;
};

struct AlgorithmResult {
  AlgorithmStatus status = AlgorithmStatus::IterationLimit;
  std::vector<double> x;
  std::vector<std::vector<double>> y;
  double objective = kInf;
  double lower_bound = -kInf;
  double upper_bound = kInf;
  std::size_t iterations = 0;
  std::vector<std::string> warnings;
  ConvergenceLog log;
};

// Relative stopping test shared by the decomposition loops.
inline bool gap_closed(double lb, double ub, double tol) {
  return std::isfinite(lb) && std::isfinite(ub) && ub - lb <= tol * (1.0 + std::abs(ub));
}

// LP over (x, y_1, ..., y_S): objective c^T x + sum_s w_s q_s^T y_s.
LinearProgram build_fullspace(const MultiScaleInstance& inst);

// Column offset of y_s inside build_fullspace's variable vector.
std::size_t fullspace_y_offset(const MultiScaleInstance& inst, std::size_t s);

// build_fullspace plus rows x_k = x_fixed_k.
LinearProgram build_fullspace_fixed_x(const MultiScaleInstance& inst, std::span<const double> x_fixed);

struct FullspaceSolution {
  double objective = kInf;
  std::vector<double> x;
  std::vector<std::vector<double>> y;
};

// Splits a full-space LP solution back into (x, y_s).
FullspaceSolution split_fullspace(const MultiScaleInstance& inst, const LpSolution& sol);

// Optimal recourse with x pinned; nullopt when the pinned LP is infeasible.
std::optional<FullspaceSolution> solve_fixed_x(const MultiScaleInstance& inst, std::span<const double> x_fixed,
                                               const LpOptions& lp_opts = {});

// One subperiod block over (x, y_s): first-stage rows, subperiod rows, x
// capped at x_upper. Costs on x are supplied by the caller; y costs are w_s q_s.
LinearProgram build_block(const MultiScaleInstance& inst, std::size_t s, std::span<const double> x_costs,
                          double x_upper);

MultiScaleInstance lower_capacity(const CapacityInstance& cap);

// Aggregated single-scale model over (x_j, y_j, y_purchase). `rho` holds one
// availability prefactor per generator followed by the minimum capacity.
LinearProgram aggregate_capacity_highlevel(const CapacityInstance& cap, std::span<const double> rho);
LinearProgram aggregate_capacity_highlevel(const CapacityInstance& cap);

struct RandomDims {
  std::size_t n_x = 2;
  std::size_t n_y = 2;
  std::size_t m_sub = 2;
  std::size_t n_subperiods = 3;
};

// Complete recourse: each subperiod carries a penalty column that can
// satisfy every one of its rows, so every bounded x >= 0 is recourse-feasible.
MultiScaleInstance generate_random_instance(std::uint64_t seed, const RandomDims& dims);

}  // namespace msopt
