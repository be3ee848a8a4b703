#pragma once
// Parametric autotuning: a parameterized high-level capacity model proposes
// x, the full model with x pinned scores it, and a derivative-free tuner
// searches the parameters.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "msopt/lp.hpp"
#include "msopt/model.hpp"

namespace msopt {

struct ParamBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// rho_1..rho_J availability prefactors, then rho_min.
struct PamsoParams {
  std::vector<double> rho;
  std::vector<ParamBounds> bounds;
};

struct MbbfRecord {
  std::vector<double> rho;
  double objective = 1e10;
  std::vector<double> x;
  std::vector<std::vector<double>> y;
  bool feasible = false;
};

std::vector<ParamBounds> default_pamso_bounds(const CapacityInstance& cap);
std::vector<double> unit_params(const CapacityInstance& cap);

struct MbbfOptions {
  double x_upper = kInf;  // optional cap on the high-level capacities
  LpOptions lp;
};

// Infeasible high or low level yields the 1e10 sentinel.
MbbfRecord evaluate_mbbf(const CapacityInstance& cap, std::span<const double> rho, const MbbfOptions& opts = {});

using MbbfObjective = std::function<MbbfRecord(const std::vector<double>&)>;

struct TuneResult {
  MbbfRecord best;
  std::vector<MbbfRecord> trace;  // every evaluation, in order
};

struct PatternSearchOptions {
  std::size_t budget = 200;
  std::vector<double> init_step;  // empty: a quarter of each range
  double shrink = 0.5;
  double min_step = 1e-12;
  std::size_t threads = 1;
};

TuneResult tune_pattern_search(const MbbfObjective& objective, const std::vector<double>& start,
                               const std::vector<ParamBounds>& bounds, const PatternSearchOptions& opts = {});

struct GeneticOptions {
  std::size_t pop_size = 20;
  std::size_t generations = 30;
  std::size_t tournament_size = 2;
  double crossover_rate = 0.9;
  double mutation_rate = 0.2;
  double mutation_sigma = 0.1;  // fraction of each range
  std::uint64_t seed = 0;
  std::size_t budget = 0;       // 0: pop_size * generations
  std::size_t threads = 1;
};

// Index of the lowest fitness among `contestants` (first one on ties).
std::size_t tournament_winner(std::span<const double> fitness, std::span<const std::size_t> contestants);

// `baseline`, when nonempty, is injected as individual 0.
TuneResult tune_genetic(const MbbfObjective& objective, const std::vector<ParamBounds>& bounds,
                        const std::vector<double>& baseline, const GeneticOptions& opts = {});

enum class DfoBackend { PatternSearch, Genetic };

struct PamsoOptions {
  DfoBackend dfo = DfoBackend::PatternSearch;
  std::vector<ParamBounds> bounds;  // empty: default_pamso_bounds
  std::size_t budget = 200;
  std::uint64_t seed = 0;
  bool compute_mm = true;
  std::size_t threads = 1;
  GeneticOptions genetic;
  MbbfOptions mbbf;
};

// Log rows: iteration = evaluation index, upper_bound = best so far,
// lower_bound = MM when computed.
AlgorithmResult run_pamso(const CapacityInstance& cap, const PamsoOptions& opts = {},
                          TuneResult* trace = nullptr);

}  // namespace msopt
