#pragma once

#include "famc/filter.hpp"
#include "famc/kernel.hpp"
#include "famc/measure.hpp"
#include "famc/set_expr.hpp"

namespace famc::fixtures {

inline GroundSpace unit() { return GroundSpace::unit_interval(); }

// η with η((0,ε)) = 1 for every ε > 0.
inline FilterFunctional eta(const GroundSpace& g) { return FilterFunctional::make("eta0plus", g, TailFamily::LeftOfPoint, 0); }

inline Kernel constant_kernel(const GroundSpace& g, Measure m) {
  Row row(g);
  row.constant = std::move(m);
  return Kernel(g, {{SetExpr::full(g), row}});
}

inline Kernel diagonal_kernel(const GroundSpace& g, const Rational& c = 1) {
  Row row(g);
  row.add_shift(0, c);
  return Kernel(g, {{SetExpr::full(g), row}});
}

// P(x,·) = ½δ₀ + ½η.
inline Kernel constant_chain() {
  const auto g = unit();
  Measure m(g);
  m.add_atom(0, Rational(1, 2)).add_filter(eta(g), Rational(1, 2));
  return constant_kernel(g, m);
}

// P(x,·) = ½δ_x + ½η.
inline Kernel lazy_chain() {
  const auto g = unit();
  Row row(g);
  row.constant.add_filter(eta(g), Rational(1, 2));
  row.add_shift(0, Rational(1, 2));
  return Kernel(g, {{SetExpr::full(g), row}});
}

// P(0,·) = δ₁, P(x,·) = η for x in (0,1].
inline Kernel jump_then_filter() {
  const auto g = unit();
  Row at_zero(g);
  at_zero.constant.add_atom(1, 1);
  Row elsewhere(g);
  elsewhere.constant.add_filter(eta(g), 1);
  IntervalBounds rest{Rational(0), Rational(1), true, false};
  return Kernel(g, {{SetExpr::point(g, 0), at_zero}, {SetExpr::interval(g, rest), elsewhere}});
}

}  // namespace famc::fixtures
