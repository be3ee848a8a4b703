#pragma once
// Dantzig-Wolfe column generation on the variable-split model. The restricted
// master mixes block columns under nonanticipativity rows (x of block 0 minus
// x of block s, per coordinate) and one convexity row per block.

#include <optional>
#include <vector>

#include "msopt/lp.hpp"
#include "msopt/model.hpp"

namespace msopt {

enum class ColumnKind { ExtremePoint, ExtremeRay };

struct Column {
  std::size_t subperiod = 0;
  ColumnKind kind = ColumnKind::ExtremePoint;
  std::vector<double> x_part;
  std::vector<double> y_part;
  double cost_part = 0.0;  // c^T x / |S| + w_s q_s^T y at the point (or along the ray)

  bool operator==(const Column&) const = default;
};

// Master row layout: nonanticipativity rows (s-1)*n_x + k for s = 1..S-1,
// then convexity rows.
std::size_t rmp_num_nac_rows(const MultiScaleInstance& inst);

// Variables: one weight per column, then a +/- artificial pair per NAC row,
// then one artificial per convexity row.
LinearProgram build_rmp(const MultiScaleInstance& inst, const std::vector<Column>& columns, double artificial_cost);

struct PricingResult {
  double value = 0.0;            // pricing optimum; -inf along a ray
  std::optional<Column> column;  // empty: no improving column
};

// nu[s-1][k] are the NAC duals and r the convexity dual of block s.
PricingResult price(const MultiScaleInstance& inst, std::size_t s, const std::vector<std::vector<double>>& nu,
                    double r_dual, double x_upper, double tol = 1e-6, const LpOptions& lp_opts = {});

struct DwOptions {
  double tol = 1e-6;
  std::size_t max_iter = 100;
  double artificial_cost = 1e7;
  double x_upper = 1e6;
  std::size_t threads = 1;
  LpOptions lp;
};

AlgorithmResult run_dw(const MultiScaleInstance& inst, const DwOptions& opts = {});

}  // namespace msopt
