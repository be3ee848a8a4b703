#pragma once
// Value of the multi-scale model (VMM) and value of the stochastic solution (VSS).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msopt/lp.hpp"
#include "msopt/model.hpp"

namespace msopt {

inline constexpr double kSentinel = 1e10;

struct SentinelFlags {
  bool mpss = false;
  bool eev = false;
};

struct MetricsReport {
  double mm = kInf;
  double mpss = kInf;
  double vmm = kInf;
  double ev = kInf;
  double eev = kInf;
  double vss = kInf;
  std::vector<double> x_sm;
  std::vector<double> x_ev;
  SentinelFlags sentinel_used;
  bool has_vmm = false;
  bool has_vss = false;
};

// Full-space optimum. Throws InfeasibleInstance, UnboundedInstance.
FullspaceSolution solve_mm(const MultiScaleInstance& inst, const LpOptions& lp_opts = {});
double compute_mm(const MultiScaleInstance& inst, const LpOptions& lp_opts = {});

// Full-space value with x pinned; kSentinel when infeasible.
double compute_mpss(const MultiScaleInstance& inst, std::span<const double> x_star, const LpOptions& lp_opts = {});

double vmm_from(double mpss, double mm);

// Produces the high-level x to be pinned; nullopt means the high level is infeasible.
using HighLevelBuilder = std::function<std::optional<std::vector<double>>()>;

MetricsReport compute_vmm(const MultiScaleInstance& inst, const HighLevelBuilder& high_level,
                          const LpOptions& lp_opts = {});
MetricsReport compute_vmm(const CapacityInstance& cap, const LpOptions& lp_opts = {});

// Throws NonConformableSubperiods when the subperiods cannot be averaged.
MultiScaleInstance expected_value_instance(const MultiScaleInstance& inst);
MetricsReport compute_ev_eev_vss(const MultiScaleInstance& inst, const LpOptions& lp_opts = {});

// {"mm":, "mpss":, "vmm":, "ev":, "eev":, "vss":, "sentinel_used": {...}}; absent quantities are null.
std::string report_to_json(const MetricsReport& r);

}  // namespace msopt
