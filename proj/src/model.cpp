#include "msopt/model.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "msopt/error.hpp"

namespace msopt {

std::string_view to_string(AlgorithmStatus s) {
  switch (s) {
    case AlgorithmStatus::Converged: return "Converged";
    case AlgorithmStatus::IterationLimit: return "IterationLimit";
    case AlgorithmStatus::Infeasible: return "Infeasible";
    case AlgorithmStatus::Unbounded: return "Unbounded";
    case AlgorithmStatus::ArtificialsNonzero: return "ArtificialsNonzero";
  }
  return "?";
}

void ConvergenceLog::record(std::size_t iteration, double lower_bound, double upper_bound) {
  LogEntry e;
  e.iteration = iteration;
  e.lower_bound = lower_bound;
  e.upper_bound = upper_bound;
  e.gap = std::isfinite(lower_bound) && std::isfinite(upper_bound) ? upper_bound - lower_bound : kInf;
  e.wall_millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  entries_.push_back(e);
}

bool operator==(const Row& a, const Row& b) {
  return a.sense == b.sense && a.rhs == b.rhs && a.coeffs == b.coeffs;
}

bool operator==(const SubperiodRow& a, const SubperiodRow& b) {
  return a.sense == b.sense && a.rhs == b.rhs && a.x_coeffs == b.x_coeffs && a.y_coeffs == b.y_coeffs;
}

bool MultiScaleInstance::operator==(const MultiScaleInstance& o) const {
  if (name != o.name || description != o.description) return false;
  if (first_stage.c != o.first_stage.c || first_stage.rows != o.first_stage.rows) return false;
  for (std::size_t k = 0; k < std::max(num_x(), o.num_x()); ++k) {
    if (!(x_bound(k) == o.x_bound(k))) return false;
  }
  if (subperiods.size() != o.subperiods.size()) return false;
  for (std::size_t s = 0; s < subperiods.size(); ++s) {
    const auto& a = subperiods[s];
    const auto& b = o.subperiods[s];
    if (a.weight != b.weight || a.q != b.q || a.rows != b.rows) return false;
    for (std::size_t j = 0; j < a.num_y(); ++j) {
      if (!(y_bound(s, j) == o.y_bound(s, j))) return false;
    }
  }
  return true;
}

VarBounds MultiScaleInstance::x_bound(std::size_t k) const {
  return k < first_stage.x_bounds.size() ? first_stage.x_bounds[k] : VarBounds{};
}

VarBounds MultiScaleInstance::y_bound(std::size_t s, std::size_t j) const {
  const auto& yb = subperiods[s].y_bounds;
  return j < yb.size() ? yb[j] : VarBounds{};
}

std::vector<double> MultiScaleInstance::effective_q(std::size_t s) const {
  std::vector<double> q = subperiods[s].q;
  for (double& v : q) v *= subperiods[s].weight;
  return q;
}

void MultiScaleInstance::validate() const {
  const std::size_t nx = num_x();
  if (subperiods.empty()) throw DimensionMismatch("instance needs at least one subperiod");
  if (!first_stage.x_bounds.empty() && first_stage.x_bounds.size() != nx) {
    throw DimensionMismatch("x_bounds has " + std::to_string(first_stage.x_bounds.size()) + " entries for " +
                            std::to_string(nx) + " first-stage variables");
  }
  for (double v : first_stage.c) {
    if (!std::isfinite(v)) throw InvalidProblem("first-stage cost is not finite");
  }
  for (std::size_t k = 0; k < nx; ++k) {
    const auto b = x_bound(k);
    if (b.lower > b.upper) throw InvalidProblem("x bound lower > upper at " + std::to_string(k));
  }
  for (std::size_t i = 0; i < first_stage.rows.size(); ++i) {
    for (const Term& t : first_stage.rows[i].coeffs) {
      if (t.index >= nx) {
        throw DimensionMismatch("first-stage row " + std::to_string(i) + " references x" + std::to_string(t.index));
      }
    }
  }
  for (std::size_t s = 0; s < subperiods.size(); ++s) {
    const auto& sp = subperiods[s];
    const std::string where = "subperiod " + std::to_string(s);
    if (!(sp.weight > 0.0) || !std::isfinite(sp.weight)) throw InvalidProblem(where + ": weight must be positive");
    if (!sp.y_bounds.empty() && sp.y_bounds.size() != sp.num_y()) {
      throw DimensionMismatch(where + ": y_bounds size disagrees with q");
    }
    for (double v : sp.q) {
      if (!std::isfinite(v)) throw InvalidProblem(where + ": cost is not finite");
    }
    for (std::size_t i = 0; i < sp.rows.size(); ++i) {
      const auto& r = sp.rows[i];
      if (!std::isfinite(r.rhs)) throw InvalidProblem(where + ": rhs is not finite");
      for (const Term& t : r.x_coeffs) {
        if (t.index >= nx) throw DimensionMismatch(where + " row " + std::to_string(i) + ": x index out of range");
      }
      for (const Term& t : r.y_coeffs) {
        if (t.index >= sp.num_y()) {
          throw DimensionMismatch(where + " row " + std::to_string(i) + ": y index out of range");
        }
      }
    }
  }
}

void CapacityInstance::validate() const {
  auto fail = [](const std::string& what) { throw DimensionMismatch("capacity instance: " + what); };
  auto check = [](double v, const char* field) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidProblem(std::string("capacity instance: ") + field +
                                                            " must be finite and nonnegative");
  };
  if (J == 0 || I == 0 || S == 0) fail("J, I and S must be positive");
  if (a.size() != S) fail("a needs S entries");
  for (const auto& as : a) {
    if (as.size() != I) fail("a[s] needs I entries");
    for (const auto& ai : as) {
      if (ai.size() != J) fail("a[s][i] needs J entries");
      for (double v : ai) {
        check(v, "a");
        if (v > 1.0) throw InvalidProblem("capacity instance: availability above 1");
      }
    }
  }
  if (c.size() != J) fail("c needs J entries");
  for (double v : c) check(v, "c");
  if (d.size() != S) fail("d needs S entries");
  for (const auto& ds : d) {
    if (ds.size() != I) fail("d[s] needs I entries");
    for (double v : ds) check(v, "d");
  }
  if (f.size() != I) fail("f needs I entries");
  for (const auto& fi : f) {
    if (fi.size() != J) fail("f[i] needs J entries");
    for (double v : fi) check(v, "f");
  }
  if (g.size() != S) fail("g needs S entries");
  for (double v : g) check(v, "g");
}

std::size_t fullspace_y_offset(const MultiScaleInstance& inst, std::size_t s) {
  std::size_t off = inst.num_x();
  for (std::size_t t = 0; t < s; ++t) off += inst.subperiods[t].num_y();
  return off;
}

LinearProgram build_fullspace(const MultiScaleInstance& inst) {
  inst.validate();
  LinearProgram lp;
  const std::size_t nx = inst.num_x();
  for (std::size_t k = 0; k < nx; ++k) lp.add_variable(inst.first_stage.c[k], inst.x_bound(k));
  for (const Row& r : inst.first_stage.rows) lp.rows.push_back(r);
  for (std::size_t s = 0; s < inst.num_subperiods(); ++s) {
    const auto& sp = inst.subperiods[s];
    const std::size_t off = lp.num_vars();
    const auto q = inst.effective_q(s);
    for (std::size_t j = 0; j < sp.num_y(); ++j) lp.add_variable(q[j], inst.y_bound(s, j));
    for (const auto& r : sp.rows) {
      std::vector<Term> coeffs = r.x_coeffs;
      for (const Term& t : r.y_coeffs) coeffs.push_back({off + t.index, t.value});
      lp.add_row(std::move(coeffs), r.sense, r.rhs);
    }
  }
  return lp;
}

LinearProgram build_fullspace_fixed_x(const MultiScaleInstance& inst, std::span<const double> x_fixed) {
  if (x_fixed.size() != inst.num_x()) {
    throw DimensionMismatch("fixed x has " + std::to_string(x_fixed.size()) + " entries, instance has " +
                            std::to_string(inst.num_x()));
  }
  LinearProgram lp = build_fullspace(inst);
  for (std::size_t k = 0; k < x_fixed.size(); ++k) lp.add_row({{k, 1.0}}, Sense::EQ, x_fixed[k]);
  return lp;
}

FullspaceSolution split_fullspace(const MultiScaleInstance& inst, const LpSolution& sol) {
  FullspaceSolution out;
  out.objective = sol.objective;
  const std::size_t nx = inst.num_x();
  out.x.assign(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(nx));
  std::size_t off = nx;
  for (const auto& sp : inst.subperiods) {
    out.y.emplace_back(sol.primal.begin() + static_cast<std::ptrdiff_t>(off),
                       sol.primal.begin() + static_cast<std::ptrdiff_t>(off + sp.num_y()));
    off += sp.num_y();
  }
  return out;
}

std::optional<FullspaceSolution> solve_fixed_x(const MultiScaleInstance& inst, std::span<const double> x_fixed,
                                               const LpOptions& lp_opts) {
  const LinearProgram lp = build_fullspace_fixed_x(inst, x_fixed);
  const LpSolution sol = solve_lp(lp, lp_opts);
  if (sol.status == LpStatus::Infeasible) return std::nullopt;
  if (sol.status == LpStatus::Unbounded) throw UnboundedInstance("recourse is unbounded for the fixed x");
  return split_fullspace(inst, sol);
}

LinearProgram build_block(const MultiScaleInstance& inst, std::size_t s, std::span<const double> x_costs,
                          double x_upper) {
  const std::size_t nx = inst.num_x();
  if (x_costs.size() != nx) throw DimensionMismatch("block x costs have the wrong length");
  LinearProgram lp;
  for (std::size_t k = 0; k < nx; ++k) {
    VarBounds b = inst.x_bound(k);
    b.upper = std::min(b.upper, x_upper);
    if (b.upper < b.lower) b.upper = b.lower;
    lp.add_variable(x_costs[k], b);
  }
  const auto& sp = inst.subperiods[s];
  const auto q = inst.effective_q(s);
  for (std::size_t j = 0; j < sp.num_y(); ++j) lp.add_variable(q[j], inst.y_bound(s, j));
  for (const Row& r : inst.first_stage.rows) lp.rows.push_back(r);
  for (const auto& r : sp.rows) {
    std::vector<Term> coeffs = r.x_coeffs;
    for (const Term& t : r.y_coeffs) coeffs.push_back({nx + t.index, t.value});
    lp.add_row(std::move(coeffs), r.sense, r.rhs);
  }
  return lp;
}

MultiScaleInstance lower_capacity(const CapacityInstance& cap) {
  cap.validate();
  const std::size_t J = cap.J, I = cap.I, S = cap.S;
  MultiScaleInstance inst;
  inst.name = "capacity";
  inst.description = "generator capacity expansion, J=" + std::to_string(J) + " I=" + std::to_string(I) +
                     " S=" + std::to_string(S);
  for (std::size_t j = 0; j < J; ++j) inst.first_stage.c.push_back(static_cast<double>(S) * cap.c[j]);
  for (std::size_t s = 0; s < S; ++s) {
    Subperiod sp;
    // y_{i,j} at i*J + j, purchases at I*J + i
    sp.q.resize(I * J + I);
    for (std::size_t i = 0; i < I; ++i) {
      for (std::size_t j = 0; j < J; ++j) sp.q[i * J + j] = cap.f[i][j];
      sp.q[I * J + i] = cap.g[s];
    }
    for (std::size_t i = 0; i < I; ++i) {
      for (std::size_t j = 0; j < J; ++j) {
        SubperiodRow r;
        r.x_coeffs = {{j, -cap.a[s][i][j]}};
        r.y_coeffs = {{i * J + j, 1.0}};
        r.sense = Sense::LE;
        r.rhs = 0.0;
        sp.rows.push_back(std::move(r));
      }
    }
    for (std::size_t i = 0; i < I; ++i) {
      SubperiodRow r;
      for (std::size_t j = 0; j < J; ++j) r.y_coeffs.push_back({i * J + j, 1.0});
      r.y_coeffs.push_back({I * J + i, 1.0});
      r.sense = Sense::GE;
      r.rhs = cap.d[s][i];
      sp.rows.push_back(std::move(r));
    }
    inst.subperiods.push_back(std::move(sp));
  }
  return inst;
}

LinearProgram aggregate_capacity_highlevel(const CapacityInstance& cap, std::span<const double> rho) {
  cap.validate();
  const std::size_t J = cap.J, I = cap.I, S = cap.S;
  if (rho.size() != J + 1) {
    throw DimensionMismatch("high-level parameters need " + std::to_string(J + 1) + " entries, got " +
                            std::to_string(rho.size()));
  }
  LinearProgram lp;
  // x_j at j, y_j at J + j, purchase at 2J
  for (std::size_t j = 0; j < J; ++j) lp.add_variable(static_cast<double>(S) * cap.c[j]);
  for (std::size_t j = 0; j < J; ++j) {
    double fsum = 0.0;
    for (std::size_t i = 0; i < I; ++i) fsum += cap.f[i][j];
    lp.add_variable(static_cast<double>(S) * fsum);
  }
  double gsum = 0.0;
  for (double v : cap.g) gsum += v;
  lp.add_variable(gsum);

  for (std::size_t j = 0; j < J; ++j) {
    double avail = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t i = 0; i < I; ++i) avail += cap.a[s][i][j];
    }
    lp.add_row({{J + j, 1.0}, {j, -rho[j] * avail}}, Sense::LE, 0.0);
  }
  double demand = 0.0;
  for (const auto& ds : cap.d) {
    for (double v : ds) demand += v;
  }
  std::vector<Term> cover;
  for (std::size_t j = 0; j < J; ++j) cover.push_back({J + j, 1.0});
  cover.push_back({2 * J, 1.0});
  lp.add_row(std::move(cover), Sense::GE, demand);
  for (std::size_t j = 0; j < J; ++j) lp.add_row({{j, 1.0}}, Sense::GE, rho[J]);
  return lp;
}

LinearProgram aggregate_capacity_highlevel(const CapacityInstance& cap) {
  std::vector<double> unit(cap.J + 1, 1.0);
  unit[cap.J] = 0.0;
  return aggregate_capacity_highlevel(cap, unit);
}

MultiScaleInstance generate_random_instance(std::uint64_t seed, const RandomDims& dims) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto coin = [&](double p) { return uniform(0.0, 1.0) < p; };

  const std::size_t nx = std::max<std::size_t>(dims.n_x, 1);
  const std::size_t ny = std::max<std::size_t>(dims.n_y, 1);
  const std::size_t regular = ny - 1;  // last column is the penalty

  MultiScaleInstance inst;
  inst.name = "random-" + std::to_string(seed);
  inst.description = "seeded complete-recourse instance";
  for (std::size_t k = 0; k < nx; ++k) {
    inst.first_stage.c.push_back(uniform(1.0, 10.0));
    inst.first_stage.x_bounds.push_back({0.0, uniform(1.0, 100.0)});
  }
  Row budget;
  for (std::size_t k = 0; k < nx; ++k) budget.coeffs.push_back({k, uniform(0.5, 1.5)});
  budget.sense = Sense::LE;
  budget.rhs = uniform(1.0, 10.0 * static_cast<double>(nx));
  inst.first_stage.rows.push_back(std::move(budget));

  for (std::size_t s = 0; s < std::max<std::size_t>(dims.n_subperiods, 1); ++s) {
    Subperiod sp;
    sp.weight = uniform(0.5, 1.5);
    for (std::size_t j = 0; j < regular; ++j) sp.q.push_back(uniform(0.0, 10.0));
    sp.q.push_back(uniform(5.0, 50.0));
    for (std::size_t i = 0; i < std::max<std::size_t>(dims.m_sub, 1); ++i) {
      SubperiodRow r;
      const bool covering = coin(0.6);
      for (std::size_t k = 0; k < nx; ++k) {
        if (coin(0.7)) r.x_coeffs.push_back({k, covering ? uniform(0.0, 2.0) : -uniform(0.0, 2.0)});
      }
      for (std::size_t j = 0; j < regular; ++j) {
        if (coin(0.7)) r.y_coeffs.push_back({j, uniform(0.2, 2.0)});
      }
      r.y_coeffs.push_back({regular, covering ? 1.0 : -1.0});
      r.sense = covering ? Sense::GE : Sense::LE;
      r.rhs = covering ? uniform(1.0, 20.0) : uniform(0.0, 5.0);
      sp.rows.push_back(std::move(r));
    }
    inst.subperiods.push_back(std::move(sp));
  }
  return inst;
}

}  // namespace msopt
