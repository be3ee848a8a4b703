#include "msopt/metrics.hpp"

#include <cmath>
#include <map>

#include "json.hpp"
#include "msopt/error.hpp"

namespace msopt {

FullspaceSolution solve_mm(const MultiScaleInstance& inst, const LpOptions& lp_opts) {
  const LinearProgram lp = build_fullspace(inst);
  const LpSolution sol = solve_lp(lp, lp_opts);
  if (sol.status == LpStatus::Infeasible) throw InfeasibleInstance("full-space model is infeasible");
  if (sol.status == LpStatus::Unbounded) throw UnboundedInstance("full-space model is unbounded");
  return split_fullspace(inst, sol);
}

double compute_mm(const MultiScaleInstance& inst, const LpOptions& lp_opts) {
  return solve_mm(inst, lp_opts).objective;
}

double compute_mpss(const MultiScaleInstance& inst, std::span<const double> x_star, const LpOptions& lp_opts) {
  const auto sol = solve_fixed_x(inst, x_star, lp_opts);
  return sol ? sol->objective : kSentinel;
}

double vmm_from(double mpss, double mm) { return mpss - mm; }

MetricsReport compute_vmm(const MultiScaleInstance& inst, const HighLevelBuilder& high_level,
                          const LpOptions& lp_opts) {
  MetricsReport r;
  r.has_vmm = true;
  r.mm = compute_mm(inst, lp_opts);
  const auto x = high_level();
  if (x) {
    r.x_sm = *x;
    r.mpss = compute_mpss(inst, r.x_sm, lp_opts);
  } else {
    r.mpss = kSentinel;
  }
  r.sentinel_used.mpss = r.mpss == kSentinel;
  r.vmm = vmm_from(r.mpss, r.mm);
  return r;
}

MetricsReport compute_vmm(const CapacityInstance& cap, const LpOptions& lp_opts) {
  const MultiScaleInstance inst = lower_capacity(cap);
  return compute_vmm(
      inst,
      [&]() -> std::optional<std::vector<double>> {
        const LpSolution sol = solve_lp(aggregate_capacity_highlevel(cap), lp_opts);
        if (!sol.optimal()) return std::nullopt;
        return std::vector<double>(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(cap.J));
      },
      lp_opts);
}

namespace {

std::vector<Term> average_terms(const std::vector<std::pair<double, const std::vector<Term>*>>& parts) {
  std::map<std::size_t, double> acc;
  for (const auto& [w, terms] : parts) {
    for (const Term& t : *terms) acc[t.index] += w * t.value;
  }
  std::vector<Term> out;
  for (const auto& [idx, v] : acc) {
    if (v != 0.0) out.push_back({idx, v});
  }
  return out;
}

}  // namespace

MultiScaleInstance expected_value_instance(const MultiScaleInstance& inst) {
  inst.validate();
  const auto& first = inst.subperiods.front();
  double total = 0.0;
  for (const auto& sp : inst.subperiods) {
    total += sp.weight;
    if (sp.num_y() != first.num_y()) throw NonConformableSubperiods("subperiods differ in y dimension");
    if (sp.rows.size() != first.rows.size()) throw NonConformableSubperiods("subperiods differ in row count");
    for (std::size_t i = 0; i < sp.rows.size(); ++i) {
      if (sp.rows[i].sense != first.rows[i].sense) {
        throw NonConformableSubperiods("subperiods differ in the sense of row " + std::to_string(i));
      }
    }
  }
  for (std::size_t s = 1; s < inst.num_subperiods(); ++s) {
    for (std::size_t j = 0; j < first.num_y(); ++j) {
      if (!(inst.y_bound(s, j) == inst.y_bound(0, j))) {
        throw NonConformableSubperiods("subperiods differ in the bounds of y" + std::to_string(j));
      }
    }
  }

  MultiScaleInstance ev;
  ev.name = inst.name.empty() ? "expected-value" : inst.name + "-ev";
  ev.description = "weight-averaged single subperiod";
  ev.first_stage = inst.first_stage;
  Subperiod avg;
  // the averaged block stands in for all subperiods at once
  avg.weight = total;
  avg.q.assign(first.num_y(), 0.0);
  avg.y_bounds = first.y_bounds;
  for (const auto& sp : inst.subperiods) {
    const double p = sp.weight / total;
    for (std::size_t j = 0; j < sp.num_y(); ++j) avg.q[j] += p * sp.q[j];
  }
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    std::vector<std::pair<double, const std::vector<Term>*>> xs, ys;
    SubperiodRow row;
    row.sense = first.rows[i].sense;
    for (const auto& sp : inst.subperiods) {
      const double p = sp.weight / total;
      xs.push_back({p, &sp.rows[i].x_coeffs});
      ys.push_back({p, &sp.rows[i].y_coeffs});
      row.rhs += p * sp.rows[i].rhs;
    }
    row.x_coeffs = average_terms(xs);
    row.y_coeffs = average_terms(ys);
    avg.rows.push_back(std::move(row));
  }
  ev.subperiods.push_back(std::move(avg));
  return ev;
}

MetricsReport compute_ev_eev_vss(const MultiScaleInstance& inst, const LpOptions& lp_opts) {
  MetricsReport r;
  r.has_vss = true;
  const MultiScaleInstance ev_inst = expected_value_instance(inst);
  r.mm = compute_mm(inst, lp_opts);
  const FullspaceSolution ev = solve_mm(ev_inst, lp_opts);
  r.ev = ev.objective;
  r.x_ev = ev.x;
  MultiScaleInstance recourse_only = inst;
  recourse_only.first_stage.rows.clear();
  r.eev = compute_mpss(recourse_only, r.x_ev, lp_opts);
  r.sentinel_used.eev = r.eev == kSentinel;
  r.vss = r.eev - r.mm;
  return r;
}

std::string report_to_json(const MetricsReport& r) {
  using nlohmann::json;
  auto num = [](bool present, double v) { return present && std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["mm"] = num(true, r.mm);
  j["mpss"] = num(r.has_vmm, r.mpss);
  j["vmm"] = num(r.has_vmm, r.vmm);
  j["ev"] = num(r.has_vss, r.ev);
  j["eev"] = num(r.has_vss, r.eev);
  j["vss"] = num(r.has_vss, r.vss);
  j["x_sm"] = r.x_sm;
  j["x_ev"] = r.x_ev;
  j["sentinel_used"] = {{"mpss", r.sentinel_used.mpss}, {"eev", r.sentinel_used.eev}};
  return j.dump(2) + "\n";
}

}  // namespace msopt
