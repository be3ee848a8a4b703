#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "msopt/dantzig_wolfe.hpp"
#include "msopt/metrics.hpp"

using namespace msopt;
using namespace msopt::testing;

TEST_CASE("RMP without columns is all artificial") {
  const auto inst = tiny2();
  const auto lp = build_rmp(inst, {}, 1e7);
  CHECK(lp.num_rows() == 1 + 2);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(2e7));
}

TEST_CASE("pricing TINY-2 block 0 at nu = 0") {
  const auto p = price(tiny2(), 0, {{0.0}}, 1e30, 1e6);
  REQUIRE(p.column.has_value());
  CHECK(p.column->kind == ColumnKind::ExtremePoint);
  CHECK(p.column->x_part[0] == doctest::Approx(1.0));
  CHECK(p.value == doctest::Approx(0.5));

  const auto none = price(tiny2(), 0, {{0.0}}, 0.5, 1e6);
  CHECK_FALSE(none.column.has_value());
}

TEST_CASE("first-round columns form a convex combination in the RMP") {
  const auto inst = tiny2();
  std::vector<Column> cols;
  for (std::size_t s = 0; s < 2; ++s) cols.push_back(*price(inst, s, {{0.0}}, 1e30, 1e6).column);
  const auto sol = solve_lp(build_rmp(inst, cols, 1e7));
  REQUIRE(sol.optimal());
  // columns, NAC artificial pair, then one artificial per convexity row
  CHECK(sol.primal[0] + sol.primal[4] == doctest::Approx(1.0));
  CHECK(sol.primal[1] + sol.primal[5] == doctest::Approx(1.0));
}

TEST_CASE("identical x parts need no artificials") {
  const auto inst = tiny2();
  Column a{0, ColumnKind::ExtremePoint, {1.0}, {0.0}, 0.5};
  Column b{1, ColumnKind::ExtremePoint, {1.0}, {1.0}, 1.0};
  const auto lp = build_rmp(inst, {a, b}, 1e7);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.objective == doctest::Approx(1.5));
  for (std::size_t v = 2; v < lp.num_vars(); ++v) CHECK(sol.primal[v] == doctest::Approx(0.0));
}

TEST_CASE("an improving unbounded direction becomes a ray column") {
  // y is free to grow with negative cost once nu makes x attractive
  MultiScaleInstance inst;
  inst.first_stage.c = {0.0};
  Subperiod s;
  s.q = {-1.0};
  s.rows.push_back({{{0, -1.0}}, {{0, 1.0}}, Sense::LE, 0.0});
  inst.subperiods.push_back(s);
  const auto p = price(inst, 0, {}, 0.0, kInf);
  REQUIRE(p.column.has_value());
  CHECK(p.column->kind == ColumnKind::ExtremeRay);
  CHECK(std::isinf(p.value));
  CHECK(p.column->cost_part < 0.0);
}

TEST_CASE("run_dw on TINY-2 recovers x = 1 at 1.5") {
  const auto r = run_dw(tiny2());
  CHECK(r.status == AlgorithmStatus::Converged);
  CHECK(r.objective == doctest::Approx(1.5));
  CHECK(r.x[0] == doctest::Approx(1.0));
}

TEST_CASE("single subperiod converges in two rounds") {
  const auto r = run_dw(tiny1());
  CHECK(r.status == AlgorithmStatus::Converged);
  CHECK(r.iterations <= 2);
  CHECK(r.objective == doctest::Approx(1.0));
}

TEST_CASE("tiny artificial cost leaves artificials in place") {
  DwOptions opts;
  opts.artificial_cost = 1e-3;
  const auto r = run_dw(tiny2(), opts);
  CHECK(r.status == AlgorithmStatus::ArtificialsNonzero);
}

TEST_CASE("random instances: objective, bounds, recovered x") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CAPTURE(seed);
    const auto inst = generate_random_instance(seed, suite_dims(seed));
    const double mm = compute_mm(inst);
    const auto r = run_dw(inst);
    CHECK(r.status == AlgorithmStatus::Converged);
    CHECK(std::abs(r.objective - mm) <= 1e-5 * (1 + std::abs(mm)));
    double prev = kInf;
    for (const auto& e : r.log.entries()) {
      CHECK(e.upper_bound <= prev);
      prev = e.upper_bound;
      CHECK(e.lower_bound <= mm + 1e-6);
      CHECK(e.upper_bound >= mm - 1e-6);
    }
    for (const Row& row : inst.first_stage.rows) {
      double act = 0.0;
      for (const Term& t : row.coeffs) act += t.value * r.x[t.index];
      CHECK(act <= row.rhs + 1e-6 * (1 + std::abs(row.rhs)));
    }
  }
}
