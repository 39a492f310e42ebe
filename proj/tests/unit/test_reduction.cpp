// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reduction.hpp"
#include "support/polar.hpp"

using namespace morrey;
using std::numbers::pi;

namespace {

RnWeight radial(int dim, const char* text, AngularWeight a = {}) { return {dim, parse_weight(text), a}; }

}  // namespace

TEST_CASE("sphere functionals") {
  SphereFunctionals a = sphere_functionals(AngularWeight(), 2, 5.0);
  CHECK(a.integral == doctest::Approx(2 * pi));
  CHECK(a.esssup == 1.0);
  a = sphere_functionals(AngularWeight::constant(3.0), 1, 2.0);
  CHECK(a.integral == doctest::Approx(18.0));
  CHECK(a.esssup == 3.0);
  CHECK(sphere_functionals(AngularWeight(), 3, 1.0).integral == doctest::Approx(4 * pi));
}

TEST_CASE("sub-unity reduced weight") {
  const WeightExpr a = reduce_subunity(radial(2, "1"), 0.5);
  for (double t : {0.1, 2.0}) CHECK(a.eval(t) == doctest::Approx(std::sqrt(2 * pi * t)).epsilon(1e-14));

  const double al = 1.7, p = 0.3;
  const WeightExpr b = reduce_subunity(radial(3, "t^1.7"), p);
  for (double t : {0.1, 2.0})
    CHECK(b.eval(t) == doctest::Approx(std::pow(t, al) * std::pow(4 * pi, 1 - p) * std::pow(t, 2 * (1 - p))).epsilon(1e-13));

  const WeightExpr c = reduce_subunity(radial(1, "exp(-1*t)", AngularWeight::constant(2.0)), 0.5);
  for (double t : {0.1, 2.0}) CHECK(c.eval(t) == doctest::Approx(std::sqrt(8.0) * std::exp(-t)).epsilon(1e-14));

  CHECK_THROWS_AS((void)reduce_subunity(radial(1, "1"), 1.0), DomainError);
}

TEST_CASE("unity reduced weight") {
  CHECK(reduce_unity(radial(2, "t^3")).eval(2.0) == doctest::Approx(8.0));
  const AngularWeight a = AngularWeight::tabulated(2, {1.0, 2.5, 0.5, 2.0});
  CHECK(reduce_unity(radial(2, "exp(-1*t)", a)).eval(1.0) == doctest::Approx(2.5 * std::exp(-1.0)));
  CHECK(reduce_unity(radial(1, "4")).eval(9.0) == doctest::Approx(4.0));
}

TEST_CASE("sub-unity lift on the plane") {
  const RnWeight v = radial(2, "1");
  const LiftedFunction f = lift_subunity(RadialTestFunction::indicator(1e-9, 1.0), v, 0.5);
  const double x[] = {0.3, 0.4};
  CHECK(f.eval(x) == doctest::Approx(1.0 / (2 * pi * 0.5)).epsilon(1e-12));
  CHECK(polar::ball_mass(f, v, 2.0, 2) == doctest::Approx(1.0 - 1e-9).epsilon(1e-9));

  const LiftedFunction z = lift_subunity(RadialTestFunction({1.0, 2.0}, {0.0}), v, 0.5);
  CHECK(polar::ball_mass(z, v, 3.0, 2) == 0.0);
}

TEST_CASE("sub-unity lift on the line") {
  const RnWeight v = radial(1, "1");
  const double p = 0.5;
  const RadialTestFunction g = RadialTestFunction::indicator(1.0, 2.0);
  const LiftedFunction f = lift_subunity(g, v, p);
  CHECK(polar::ball_mass(f, v, 3.0, 1) == doctest::Approx(1.0).epsilon(1e-8));
  const WeightExpr vt = reduce_subunity(v, p);
  const double rhs = polar::reduced_integral(g, vt, p, 3.0);
  CHECK(polar::ball_weighted(f, v, p, 3.0, 1) == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("unity lift") {
  const RnWeight v = radial(2, "1");
  const RadialTestFunction g = RadialTestFunction::indicator(1e-12, 1.0);
  const LiftedFunction f = lift_unity(g, v, 0.01);
  CHECK(polar::ball_weighted(f, v, 1.0, 1.0, 2) == doctest::Approx(1.0).epsilon(1e-9));

  const AngularWeight two = AngularWeight::tabulated(2, {1.0, 1.0, 2.0, 2.0});  // upper, lower half
  const RnWeight w = radial(2, "1", two);
  const LiftedFunction h = lift_unity(g, w, 0.01);
  const double num = polar::ball_weighted(h, w, 1.0, 1.0, 2);
  const double den = polar::reduced_integral(g, reduce_unity(w), 1.0, 1.0);
  CHECK(num / den >= 0.995);
  CHECK(num / den <= 1.0 + 1e-12);
}

TEST_CASE("LM_{p,p} as a Lebesgue space") {
  const LebesgueWeight u = morrey_to_lebesgue(radial(1, "1"), parse_weight("(1+t)^-2"), 1.0);
  for (double t : {0.2, 3.0}) CHECK(u.radial(t) == doctest::Approx(1.0 / (1.0 + t)).epsilon(1e-10));
  const LebesgueWeight e = morrey_to_lebesgue(radial(1, "t^1"), parse_weight("exp(-1*t)"), 1.0);
  for (double t : {0.2, 3.0}) CHECK(e.radial(t) == doctest::Approx(t * std::exp(-t)).epsilon(1e-10));
  CHECK_THROWS_AS((void)morrey_to_lebesgue(radial(1, "1"), parse_weight("1"), 1.0), DegenerateError);
}

TEST_CASE("complementary transform") {
  const int n = 2;
  const double p = 1.5, q = 2.5, al = 0.7, be = -1.3;
  const ComplementaryPair c = complementary_transform(radial(n, "t^0.7"), parse_weight("t^-1.3"), p, q);
  for (double t : {0.3, 4.0}) {
    CHECK(c.v.radial.eval(t) == doctest::Approx(std::pow(t, -al - 2.0 * n / p)).epsilon(1e-13));
    CHECK(c.w.eval(t) == doctest::Approx(std::pow(t, -be - 2.0 / q)).epsilon(1e-13));
  }
  const ComplementaryPair back = complementary_transform(c.v, c.w, p, q);
  for (double t : {0.3, 4.0}) {
    CHECK(back.v.radial.eval(t) == doctest::Approx(std::pow(t, al)).epsilon(1e-13));
    CHECK(back.w.eval(t) == doctest::Approx(std::pow(t, be)).epsilon(1e-13));
  }
  CHECK_THROWS_AS((void)complementary_transform(radial(n, "log(e+t)^1"), parse_weight("1"), p, q), UnsupportedError);
}
