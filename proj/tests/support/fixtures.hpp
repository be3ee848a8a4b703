#pragma once

#include "msopt/model.hpp"

namespace msopt::testing {

// x scalar, c = 1; one subperiod q = 3 with x + y >= 1.
inline MultiScaleInstance tiny1() {
  MultiScaleInstance inst;
  inst.name = "tiny-1";
  inst.first_stage.c = {1.0};
  Subperiod s;
  s.q = {3.0};
  s.rows.push_back({{{0, 1.0}}, {{0, 1.0}}, Sense::GE, 1.0});
  inst.subperiods.push_back(s);
  return inst;
}

// tiny1 plus q = 0.5 with x + y >= 2.
inline MultiScaleInstance tiny2() {
  MultiScaleInstance inst = tiny1();
  inst.name = "tiny-2";
  Subperiod s;
  s.q = {0.5};
  s.rows.push_back({{{0, 1.0}}, {{0, 1.0}}, Sense::GE, 2.0});
  inst.subperiods.push_back(s);
  return inst;
}

// c = 1; q = 0 with y >= 1 and y - x <= 0.
inline MultiScaleInstance tiny3() {
  MultiScaleInstance inst;
  inst.name = "tiny-3";
  inst.first_stage.c = {1.0};
  Subperiod s;
  s.q = {0.0};
  s.rows.push_back({{}, {{0, 1.0}}, Sense::GE, 1.0});
  s.rows.push_back({{{0, -1.0}}, {{0, 1.0}}, Sense::LE, 0.0});
  inst.subperiods.push_back(s);
  return inst;
}

// J=1, I=1, S=2, a = 1, c = 1, f = 1, g = (10, 10), d = (1, 2).
inline CapacityInstance micro_capacity() {
  CapacityInstance cap;
  cap.J = 1;
  cap.I = 1;
  cap.S = 2;
  cap.a = {{{1.0}}, {{1.0}}};
  cap.c = {1.0};
  cap.d = {{1.0}, {2.0}};
  cap.f = {{1.0}};
  cap.g = {10.0, 10.0};
  return cap;
}

// Seeded capacity instance with J generators, I parts, S days.
CapacityInstance random_capacity(std::uint64_t seed, std::size_t J, std::size_t I, std::size_t S);

}  // namespace msopt::testing

namespace msopt::testing {

// Dims for the seeded random suite, all within (3 x, 4 y, 4 rows, 4 subperiods).
inline RandomDims suite_dims(std::uint64_t seed) {
  RandomDims d;
  d.n_x = 1 + seed % 3;
  d.n_y = 2 + (seed / 3) % 3;
  d.m_sub = 1 + (seed / 9) % 4;
  d.n_subperiods = 1 + (seed / 4) % 4;
  return d;
}

}  // namespace msopt::testing
