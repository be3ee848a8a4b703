#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "msopt/metrics.hpp"
#include "msopt/pamso.hpp"

using namespace msopt;
using namespace msopt::testing;

namespace {

MbbfObjective quadratic() {
  return [](const std::vector<double>& rho) {
    MbbfRecord r;
    r.rho = rho;
    r.objective = (rho[0] - 0.5) * (rho[0] - 0.5);
    r.feasible = true;
    return r;
  };
}

bool nonincreasing_best(const TuneResult& t) {
  double best = kInf;
  for (const auto& r : t.trace) {
    const double next = std::min(best, r.objective);
    if (next > best) return false;
    best = next;
  }
  return best == t.best.objective;
}

}  // namespace

TEST_CASE("MBBF on the micro instance") {
  const auto cap = micro_capacity();
  const auto unit = evaluate_mbbf(cap, unit_params(cap));
  CHECK(unit.feasible);
  CHECK(unit.objective == doctest::Approx(10.5));
  CHECK(unit.objective == doctest::Approx(compute_vmm(cap).mpss).epsilon(1e-12));

  const auto tuned = evaluate_mbbf(cap, std::vector<double>{0.75, 0.0});
  CHECK(tuned.objective == doctest::Approx(7.0));
  CHECK(tuned.x[0] == doctest::Approx(2.0));
}

TEST_CASE("infeasible high level returns the sentinel") {
  MbbfOptions opts;
  opts.x_upper = 1.0;
  const auto r = evaluate_mbbf(micro_capacity(), std::vector<double>{1.0, 2.0}, opts);
  CHECK_FALSE(r.feasible);
  CHECK(r.objective == 1e10);
}

TEST_CASE("MBBF never beats MM") {
  const auto cap = random_capacity(11, 2, 2, 3);
  const double mm = compute_mm(lower_capacity(cap));
  std::mt19937_64 rng(3);
  const auto bounds = default_pamso_bounds(cap);
  for (int i = 0; i < 30; ++i) {
    std::vector<double> rho;
    for (const auto& b : bounds) rho.push_back(std::uniform_real_distribution<double>(b.lower, b.upper)(rng));
    CHECK(evaluate_mbbf(cap, rho).objective >= mm - 1e-6);
  }
}

TEST_CASE("default bounds") {
  const auto b = default_pamso_bounds(micro_capacity());
  REQUIRE(b.size() == 2);
  CHECK(b[0].upper == 1.5);
  CHECK(b[1].upper == 2.0);
}

TEST_CASE("pattern search on a 1-D quadratic") {
  PatternSearchOptions opts;
  opts.budget = 100;
  opts.init_step = {0.25};
  const auto t = tune_pattern_search(quadratic(), {0.0}, {{0.0, 1.5}}, opts);
  CHECK(std::abs(t.best.rho[0] - 0.5) < 1e-2);
  CHECK(t.trace.size() <= 100);
  CHECK(nonincreasing_best(t));
}

TEST_CASE("pattern search with budget 1 evaluates the start only") {
  PatternSearchOptions opts;
  opts.budget = 1;
  const auto t = tune_pattern_search(quadratic(), {0.0}, {{0.0, 1.5}}, opts);
  REQUIRE(t.trace.size() == 1);
  CHECK(t.best.rho[0] == 0.0);
}

TEST_CASE("tournament picks the lowest fitness") {
  const std::vector<double> fitness{5, 3, 9, 7};
  const std::vector<std::size_t> first{0, 1}, second{2, 3};
  CHECK(fitness[tournament_winner(fitness, first)] == 3);
  CHECK(fitness[tournament_winner(fitness, second)] == 7);
}

TEST_CASE("constant landscape keeps a flat best-so-far") {
  MbbfObjective flat = [](const std::vector<double>& rho) {
    MbbfRecord r;
    r.rho = rho;
    r.objective = 4.0;
    r.feasible = true;
    return r;
  };
  GeneticOptions opts;
  opts.pop_size = 6;
  opts.generations = 4;
  const auto t = tune_genetic(flat, {{0.0, 1.0}}, {}, opts);
  CHECK(t.best.objective == 4.0);
  // the elite is not re-evaluated
  CHECK(t.trace.size() == 6 + 3 * 5);
  for (const auto& r : t.trace) CHECK(r.objective == 4.0);
}

TEST_CASE("seeded GA on a quadratic is accurate and reproducible") {
  GeneticOptions opts;
  opts.pop_size = 20;
  opts.generations = 30;
  opts.seed = 0;
  const auto a = tune_genetic(quadratic(), {{0.0, 1.5}}, {}, opts);
  const auto b = tune_genetic(quadratic(), {{0.0, 1.5}}, {}, opts);
  CHECK(std::abs(a.best.rho[0] - 0.5) < 5e-2);
  CHECK(a.best.rho == b.best.rho);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].rho == b.trace[i].rho);
  CHECK(nonincreasing_best(a));
  // frozen regression value
  CHECK(a.best.rho[0] == doctest::Approx(0.50000020623730468).epsilon(1e-12));
  CHECK(a.trace.size() == 571);
}

TEST_CASE("threads do not change GA results") {
  GeneticOptions opts;
  opts.pop_size = 10;
  opts.generations = 5;
  opts.seed = 9;
  const auto a = tune_genetic(quadratic(), {{0.0, 1.5}}, {1.0}, opts);
  opts.threads = 4;
  const auto b = tune_genetic(quadratic(), {{0.0, 1.5}}, {1.0}, opts);
  CHECK(a.best.rho == b.best.rho);
  CHECK(a.trace.front().rho[0] == 1.0);
}

TEST_CASE("PAMSO on the micro instance reaches MM") {
  const auto cap = micro_capacity();
  PamsoOptions opts;
  opts.budget = 200;
  const auto r = run_pamso(cap, opts);
  CHECK(r.status == AlgorithmStatus::Converged);
  CHECK(r.objective == doctest::Approx(7.0).epsilon(1e-6));
  CHECK(r.lower_bound == doctest::Approx(7.0));
  double prev = kInf;
  for (const auto& e : r.log.entries()) {
    CHECK(e.upper_bound <= prev);
    prev = e.upper_bound;
  }
}

TEST_CASE("budget 1 returns the unit-parameter value") {
  for (auto dfo : {DfoBackend::PatternSearch, DfoBackend::Genetic}) {
    const auto cap = random_capacity(2, 2, 2, 2);
    PamsoOptions opts;
    opts.dfo = dfo;
    opts.budget = 1;
    const auto r = run_pamso(cap, opts);
    CHECK(r.objective == doctest::Approx(compute_vmm(cap).mpss).epsilon(1e-12));
  }
}

TEST_CASE("both tuners beat or match MPSS on the micro instance") {
  const auto cap = micro_capacity();
  const double mpss = compute_vmm(cap).mpss;
  for (auto dfo : {DfoBackend::PatternSearch, DfoBackend::Genetic}) {
    PamsoOptions opts;
    opts.dfo = dfo;
    opts.budget = 100;
    CHECK(run_pamso(cap, opts).objective <= mpss + 1e-9);
  }
}
