#include "msopt/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "msopt/error.hpp"
#include "msopt/kernels.hpp"

namespace msopt {

std::string_view to_string(Sense s) {
  switch (s) {
    case Sense::LE: return "LE";
    case Sense::GE: return "GE";
    case Sense::EQ: return "EQ";
  }
  return "?";
}

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

std::size_t LinearProgram::add_variable(double cost, VarBounds b) {
  costs.push_back(cost);
  bounds.push_back(b);
  return costs.size() - 1;
}

std::size_t LinearProgram::add_row(std::vector<Term> coeffs, Sense sense, double rhs) {
  rows.push_back(Row{std::move(coeffs), sense, rhs});
  return rows.size() - 1;
}

void LinearProgram::validate() const {
  const std::size_t n = costs.size();
  if (bounds.size() != n) {
    throw InvalidProblem("bounds: expected " + std::to_string(n) + " entries, got " +
                         std::to_string(bounds.size()));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(costs[j])) throw InvalidProblem("cost " + std::to_string(j) + " is not finite");
    const auto& b = bounds[j];
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower == kInf || b.upper == -kInf) {
      throw InvalidProblem("bounds of variable " + std::to_string(j) + " are malformed");
    }
    if (b.lower > b.upper) {
      throw InvalidProblem("variable " + std::to_string(j) + " has lower > upper");
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!std::isfinite(r.rhs)) throw InvalidProblem("rhs of row " + std::to_string(i) + " is not finite");
    for (const auto& t : r.coeffs) {
      if (t.index >= n) {
        throw InvalidProblem("row " + std::to_string(i) + " references variable " +
                             std::to_string(t.index) + " of " + std::to_string(n));
      }
      if (!std::isfinite(t.value)) {
        throw InvalidProblem("row " + std::to_string(i) + " has a non-finite coefficient");
      }
    }
  }
  if (!var_names.empty() && var_names.size() != n) throw InvalidProblem("var_names size mismatch");
  if (!row_names.empty() && row_names.size() != rows.size()) throw InvalidProblem("row_names size mismatch");
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kBreakdownTol = 1e-12;

// Columns are laid out as [structural | slack | artificial]. Each row i reads
// sum_j A_ij x_j + s_i (+ sigma_i a_i) = b_i, with slack bounds encoding the
// row sense: LE -> [0, inf), GE -> (-inf, 0], EQ -> [0, 0].
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& opts)
      : m_(lp.num_rows()), n_(lp.num_vars()), opts_(opts) {
    const std::size_t nm = n_ + m_;
    max_pivots_ = opts.max_pivots ? opts.max_pivots : 200 * nm + 1000;
    bland_after_ = opts.bland_after ? opts.bland_after : 10 * nm;

    cols_.assign((n_ + m_) * m_, 0.0);
    lower_.reserve(n_ + 2 * m_);
    upper_.reserve(n_ + 2 * m_);
    cost_.assign(n_ + m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      lower_.push_back(lp.bounds[j].lower);
      upper_.push_back(lp.bounds[j].upper);
      cost_[j] = lp.costs[j];
    }
    rhs_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const Row& row = lp.rows[i];
      for (const Term& t : row.coeffs) cols_[t.index * m_ + i] += t.value;
      cols_[(n_ + i) * m_ + i] = 1.0;
      rhs_[i] = row.rhs;
      switch (row.sense) {
        case Sense::LE: lower_.push_back(0.0); upper_.push_back(kInf); break;
        case Sense::GE: lower_.push_back(-kInf); upper_.push_back(0.0); break;
        case Sense::EQ: lower_.push_back(0.0); upper_.push_back(0.0); break;
      }
    }
    ncols_ = n_ + m_;
    at_upper_.assign(ncols_, false);
    x_.assign(ncols_, 0.0);
    for (std::size_t j = 0; j < ncols_; ++j) place_at_bound(j);
  }

  LpSolution solve() {
    LpSolution sol;
    build_phase_one_basis();

    if (num_artificial_ > 0) {
      std::vector<double> phase_one_cost(ncols_, 0.0);
      for (std::size_t j = n_ + m_; j < ncols_; ++j) phase_one_cost[j] = 1.0;
      run(phase_one_cost, /*allow_unbounded=*/false);
      refactor();
      bool infeasible = false;
      for (std::size_t r = 0; r < m_; ++r) {
        if (basis_[r] < n_ + m_) continue;
        const double b = std::abs(rhs_[artificial_row_[basis_[r] - n_ - m_]]);
        if (xb_[r] > opts_.tol_feas * (1.0 + b)) infeasible = true;
      }
      if (infeasible) {
        sol.status = LpStatus::Infeasible;
        sol.farkas_ray = duals(phase_one_cost);
        sol.iterations = pivots_;
        return sol;
      }
      // Artificials may stay basic at zero but can never grow again.
      for (std::size_t j = n_ + m_; j < ncols_; ++j) {
        lower_[j] = 0.0;
        upper_[j] = 0.0;
        if (basic_pos_[j] < 0) {
          at_upper_[j] = false;
          x_[j] = 0.0;
        }
      }
    }

    std::vector<double> phase_two_cost(ncols_, 0.0);
    std::copy(cost_.begin(), cost_.begin() + static_cast<std::ptrdiff_t>(n_), phase_two_cost.begin());
    const RunResult res = run(phase_two_cost, /*allow_unbounded=*/true);
    sol.iterations = pivots_;
    if (res.unbounded) {
      sol.status = LpStatus::Unbounded;
      sol.primal_ray = res.ray;
      return sol;
    }
    refactor();
    sol.status = LpStatus::Optimal;
    sol.primal.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      sol.primal[j] = basic_pos_[j] >= 0 ? xb_[static_cast<std::size_t>(basic_pos_[j])] : x_[j];
    }
    sol.duals = duals(phase_two_cost);
    double obj = 0.0;
    for (std::size_t j = 0; j < n_; ++j) obj += cost_[j] * sol.primal[j];
    sol.objective = obj;
    return sol;
  }

 private:
  struct RunResult {
    bool unbounded = false;
    std::vector<double> ray;
  };

  std::span<const double> column(std::size_t j) const { return {cols_.data() + j * m_, m_}; }
  std::span<double> binv_row(std::size_t r) { return {binv_.data() + r * m_, m_}; }
  std::span<const double> binv_row(std::size_t r) const { return {binv_.data() + r * m_, m_}; }

  void place_at_bound(std::size_t j) {
    if (std::isfinite(lower_[j])) {
      at_upper_[j] = false;
      x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      at_upper_[j] = true;
      x_[j] = upper_[j];
    } else {
      at_upper_[j] = false;
      x_[j] = 0.0;
    }
  }

  void build_phase_one_basis() {
    // residual with every structural at its starting bound
    std::vector<double> r = rhs_;
    for (std::size_t j = 0; j < n_; ++j) {
      if (x_[j] != 0.0) simd::axpy(-x_[j], column(j), r);
    }
    basis_.assign(m_, 0);
    xb_.assign(m_, 0.0);
    std::vector<double> sigma(m_, 1.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t s = n_ + i;
      if (r[i] >= lower_[s] && r[i] <= upper_[s]) {
        basis_[i] = s;
        xb_[i] = r[i];
        continue;
      }
      const double clipped = std::clamp(r[i], lower_[s], upper_[s]);
      x_[s] = clipped;
      at_upper_[s] = std::isfinite(upper_[s]) && clipped == upper_[s] && clipped != lower_[s];
      const double excess = r[i] - clipped;
      sigma[i] = excess > 0.0 ? 1.0 : -1.0;
      const std::size_t a = ncols_++;
      cols_.resize(ncols_ * m_, 0.0);
      cols_[a * m_ + i] = sigma[i];
      lower_.push_back(0.0);
      upper_.push_back(kInf);
      at_upper_.push_back(false);
      x_.push_back(0.0);
      artificial_row_.push_back(i);
      basis_[i] = a;
      xb_[i] = std::abs(excess);
      ++num_artificial_;
    }
    basic_pos_.assign(ncols_, -1);
    for (std::size_t i = 0; i < m_; ++i) basic_pos_[basis_[i]] = static_cast<std::ptrdiff_t>(i);
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = (basis_[i] >= n_ + m_) ? sigma[i] : 1.0;
  }

  // Gauss-Jordan inverse of the basis with partial pivoting, then a fresh
  // x_B = B^{-1} (b - N x_N).
  void refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return;
    std::vector<double> work(m_ * m_);
    for (std::size_t r = 0; r < m_; ++r) {
      const auto col = column(basis_[r]);
      for (std::size_t i = 0; i < m_; ++i) work[i * m_ + r] = col[i];
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    for (std::size_t k = 0; k < m_; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < m_; ++i) {
        if (std::abs(work[i * m_ + k]) > std::abs(work[p * m_ + k])) p = i;
      }
      const double piv = work[p * m_ + k];
      if (std::abs(piv) < kBreakdownTol) {
        throw NumericalBreakdown("singular basis during refactorization (pivot " + std::to_string(piv) + ")");
      }
      if (p != k) {
        std::swap_ranges(work.begin() + static_cast<std::ptrdiff_t>(p * m_),
                         work.begin() + static_cast<std::ptrdiff_t>((p + 1) * m_),
                         work.begin() + static_cast<std::ptrdiff_t>(k * m_));
        std::swap_ranges(binv_.begin() + static_cast<std::ptrdiff_t>(p * m_),
                         binv_.begin() + static_cast<std::ptrdiff_t>((p + 1) * m_),
                         binv_.begin() + static_cast<std::ptrdiff_t>(k * m_));
      }
      const double inv = 1.0 / piv;
      for (std::size_t c = 0; c < m_; ++c) {
        work[k * m_ + c] *= inv;
        binv_[k * m_ + c] *= inv;
      }
      std::span<const double> wk(work.data() + k * m_, m_);
      std::span<const double> bk(binv_.data() + k * m_, m_);
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == k) continue;
        const double f = work[i * m_ + k];
        if (f == 0.0) continue;
        simd::axpy(-f, wk, std::span<double>(work.data() + i * m_, m_));
        simd::axpy(-f, bk, std::span<double>(binv_.data() + i * m_, m_));
      }
    }
    std::vector<double> r = rhs_;
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (basic_pos_[j] < 0 && x_[j] != 0.0) simd::axpy(-x_[j], column(j), r);
    }
    for (std::size_t i = 0; i < m_; ++i) xb_[i] = simd::dot(binv_row(i), r);
  }

  std::vector<double> duals(const std::vector<double>& c) const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = c[basis_[r]];
      if (cb != 0.0) simd::axpy(cb, binv_row(r), y);
    }
    return y;
  }

  RunResult run(const std::vector<double>& c, bool allow_unbounded) {
    std::vector<double> alpha(m_);
    for (;;) {
      if (pivots_ >= max_pivots_) {
        throw MaxPivotsExceeded("simplex exceeded " + std::to_string(max_pivots_) + " pivots");
      }
      if (since_refactor_ >= opts_.refactor_every) refactor();
      const bool bland = pivots_ >= bland_after_;
      const std::vector<double> y = duals(c);

      // pricing
      std::size_t q = ncols_;
      double best = 0.0;
      int dir = 0;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (basic_pos_[j] >= 0 || lower_[j] == upper_[j]) continue;
        const double d = c[j] - simd::dot(y, column(j));
        const double tol = opts_.tol_opt * (1.0 + std::abs(c[j]));
        const bool has_lower = std::isfinite(lower_[j]);
        const bool has_upper = std::isfinite(upper_[j]);
        int cand = 0;
        if (!has_lower && !has_upper) {
          if (d < -tol) cand = 1;
          else if (d > tol) cand = -1;
        } else if (at_upper_[j]) {
          if (d > tol) cand = -1;
        } else {
          if (d < -tol) cand = 1;
        }
        if (cand == 0) continue;
        if (bland) {
          q = j;
          dir = cand;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dir = cand;
        }
      }
      if (q == ncols_) return {};

      for (std::size_t r = 0; r < m_; ++r) alpha[r] = simd::dot(binv_row(r), column(q));

      // ratio test; rate[r] = change of x_B[r] per unit step
      std::size_t leave = m_;
      double theta = kInf;
      if (bland) {
        const auto eps = [](double v) { return 1e-12 * (1.0 + v); };
        for (std::size_t r = 0; r < m_; ++r) {
          double t;
          if (!step_limit(r, -dir * alpha[r], 0.0, t)) continue;
          if (leave == m_ || t < theta - eps(theta)) {
            leave = r;
            theta = t;
          } else if (t <= theta + eps(theta) && basis_[r] < basis_[leave]) {
            leave = r;
            theta = std::min(theta, t);
          }
        }
      } else {
        // Harris two-pass: relaxed bound first, then the largest pivot
        // among rows that block within it.
        const double relax = 0.1 * opts_.tol_feas;
        double theta_max = kInf;
        for (std::size_t r = 0; r < m_; ++r) {
          double t;
          if (step_limit(r, -dir * alpha[r], relax, t)) theta_max = std::min(theta_max, t);
        }
        if (std::isfinite(theta_max)) {
          double best_pivot = 0.0;
          for (std::size_t r = 0; r < m_; ++r) {
            double t;
            if (!step_limit(r, -dir * alpha[r], 0.0, t)) continue;
            if (t <= theta_max && std::abs(alpha[r]) > best_pivot) {
              best_pivot = std::abs(alpha[r]);
              leave = r;
              theta = t;
            }
          }
        }
      }

      const double span = upper_[q] - lower_[q];
      const bool flip = std::isfinite(span) && span <= theta;
      if (!flip && leave == m_) {
        if (!allow_unbounded) {
          throw NumericalBreakdown("phase one reported an unbounded direction");
        }
        return unbounded_ray(q, dir, alpha);
      }

      const double step = flip ? span : theta;
      ++pivots_;
      ++since_refactor_;
      if (step != 0.0) simd::axpy(-dir * step, alpha, xb_);
      if (flip) {
        at_upper_[q] = !at_upper_[q];
        x_[q] = at_upper_[q] ? upper_[q] : lower_[q];
        continue;
      }

      const double entering_value = x_[q] + dir * step;
      const std::size_t out = basis_[leave];
      const double rate = -dir * alpha[leave];
      if (rate < 0.0) {
        at_upper_[out] = false;
        x_[out] = lower_[out];
      } else {
        at_upper_[out] = true;
        x_[out] = upper_[out];
      }
      basic_pos_[out] = -1;
      basis_[leave] = q;
      basic_pos_[q] = static_cast<std::ptrdiff_t>(leave);
      xb_[leave] = entering_value;
      x_[q] = 0.0;
      pivot_inverse(leave, alpha);
    }
  }

  // Step length until basic row r reaches a bound when it moves at `rate`.
  bool step_limit(std::size_t r, double rate, double relax, double& t) const {
    const std::size_t b = basis_[r];
    if (rate < -kPivotTol && std::isfinite(lower_[b])) {
      t = std::max(xb_[r] - lower_[b] + relax, 0.0) / -rate;
      return true;
    }
    if (rate > kPivotTol && std::isfinite(upper_[b])) {
      t = std::max(upper_[b] - xb_[r] + relax, 0.0) / rate;
      return true;
    }
    return false;
  }

  void pivot_inverse(std::size_t r, const std::vector<double>& alpha) {
    const double piv = alpha[r];
    if (std::abs(piv) < kBreakdownTol) {
      throw NumericalBreakdown("pivot magnitude " + std::to_string(piv) + " below 1e-12");
    }
    auto row_r = binv_row(r);
    const double inv = 1.0 / piv;
    for (double& v : row_r) v *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      simd::axpy(-alpha[i], row_r, binv_row(i));
    }
  }

  RunResult unbounded_ray(std::size_t q, int dir, const std::vector<double>& alpha) const {
    RunResult res;
    res.unbounded = true;
    res.ray.assign(n_, 0.0);
    if (q < n_) res.ray[q] = dir;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) res.ray[basis_[r]] = -dir * alpha[r];
    }
    double scale = 0.0;
    for (double v : res.ray) scale = std::max(scale, std::abs(v));
    if (scale > 0.0) {
      for (double& v : res.ray) v /= scale;
    }
    return res;
  }

  std::size_t m_, n_;
  LpOptions opts_;
  std::size_t max_pivots_ = 0;
  std::size_t bland_after_ = 0;
  std::size_t ncols_ = 0;
  std::size_t num_artificial_ = 0;
  std::vector<std::size_t> artificial_row_;
  std::vector<double> cols_;
  std::vector<double> lower_, upper_, cost_, rhs_;
  std::vector<double> x_;
  std::vector<bool> at_upper_;
  std::vector<std::size_t> basis_;
  std::vector<std::ptrdiff_t> basic_pos_;
  std::vector<double> xb_;
  std::vector<double> binv_;
  std::size_t pivots_ = 0;
  std::size_t since_refactor_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  lp.validate();
  Simplex simplex(lp, opts);
  return simplex.solve();
}

void write_lp_text(const LinearProgram& lp, std::ostream& os) {
  auto var = [&](std::size_t j) {
    return j < lp.var_names.size() && !lp.var_names[j].empty() ? lp.var_names[j] : "x" + std::to_string(j);
  };
  auto term = [&](double v, std::size_t j, bool first) {
    std::string s;
    if (v < 0) s = first ? "- " : " - ";
    else s = first ? "" : " + ";
    os << s << std::abs(v) << ' ' << var(j);
  };
  os.precision(17);
  os << "Minimize\n obj:";
  bool first = true;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (lp.costs[j] == 0.0) continue;
    os << ' ';
    term(lp.costs[j], j, first);
    first = false;
  }
  if (first) os << " 0 " << var(0);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const Row& r = lp.rows[i];
    os << ' ' << (i < lp.row_names.size() && !lp.row_names[i].empty() ? lp.row_names[i] : "r" + std::to_string(i))
       << ':';
    bool f = true;
    for (const Term& t : r.coeffs) {
      os << ' ';
      term(t.value, t.index, f);
      f = false;
    }
    if (f) os << " 0 " << var(0);
    os << (r.sense == Sense::LE ? " <= " : r.sense == Sense::GE ? " >= " : " = ") << r.rhs << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const auto& b = lp.bounds[j];
    if (!std::isfinite(b.lower) && !std::isfinite(b.upper)) {
      os << ' ' << var(j) << " free\n";
    } else {
      os << ' ';
      if (std::isfinite(b.lower)) os << b.lower;
      else os << "-inf";
      os << " <= " << var(j) << " <= ";
      if (std::isfinite(b.upper)) os << b.upper;
      else os << "+inf";
      os << '\n';
    }
  }
  os << "End\n";
}

}  // namespace msopt
