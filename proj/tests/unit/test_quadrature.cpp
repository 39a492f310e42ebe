// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "quadrature.hpp"
#include "support/reference.hpp"

using namespace morrey;

TEST_CASE("closed forms and divergence certificates") {
  const QuadResult a = integrate_weighted(parse_weight("t^2"), 1.0, 0.0, 1.0);
  CHECK(a.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(a.exact);

  const QuadResult b = integrate_weighted(parse_weight("(1+t)^-2"), 1.0, 0.0, kInf);
  CHECK(std::abs(b.value - 1.0) <= 1e-9);
  CHECK(b.converged);

  const QuadResult c = integrate_weighted(parse_weight("t^-1"), 1.0, 1.0, kInf);
  CHECK(std::isinf(c.value));
  CHECK(c.divergent());
  CHECK_FALSE(c.certificate.empty());

  CHECK_THROWS_AS((void)integrate_weighted(parse_weight("t^2"), 1.0, 2.0, 1.0), DomainError);
}

TEST_CASE("quadrature of smooth non-closed-form integrands") {
  const WeightExpr w = parse_weight("t^0.5 * (1+t)^-3 * log(e+t)^1");
  const double want = ref::integrate([&](double t) { return std::sqrt(t) * std::pow(1 + t, -3) * std::log(std::exp(1.0) + t); },
                                     0.0, ref::inf);
  const QuadResult q = integrate_weighted(w, 1.0, 0.0, kInf);
  CHECK(q.converged);
  CHECK(ref::rel_close(q.value, want, 1e-9));
  CHECK(q.abs_error <= 1e-9 * std::max(1.0, q.value));
}

TEST_CASE("piecewise weights integrate across breakpoints") {
  const WeightExpr w = parse_weight("{1 on (0,1); t^-2 on (1,inf)}");
  CHECK(integrate_weighted(w, 1.0, 0.0, kInf).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_weighted(w, 2.0, 0.5, 2.0).value == doctest::Approx(0.5 + (1.0 - 1.0 / 8.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("tail norms") {
  CHECK(tail_norm(parse_weight("(1+t)^-2"), 1.0, 0.0).value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(tail_norm(parse_weight("exp(-1*t)"), 2.0, 0.0).value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(std::isinf(tail_norm(parse_weight("1"), 1.0, 5.0).value));
  const WeightExpr w = parse_weight("(1+t)^-1.5 * log(e+t)^-1");
  double prev = kInf;
  for (double t : {0.0, 0.1, 1.0, 10.0, 1e3}) {
    const double x = tail_norm(w, 2.0, t).value;
    CHECK(x <= prev);
    prev = x;
  }
}

TEST_CASE("essential suprema") {
  CHECK(essential_sup(parse_weight("t^2"), 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(essential_sup(parse_weight("(1+t)^-2"), 0.0, kInf) == doctest::Approx(1.0));
  CHECK(essential_sup(parse_weight("t^1*exp(-1*t)"), 0.0, kInf) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  CHECK(std::isinf(essential_sup(parse_weight("t^1"), 0.0, kInf)));
}

TEST_CASE("sup search") {
  const SupResult a = sup_search([](double x) { return -(x - 2) * (x - 2); }, 0.0, kInf);
  CHECK(std::abs(a.argsup - 2.0) <= 1e-6);
  CHECK(std::abs(a.sup) <= 1e-10);
  const SupResult b = sup_search([](double x) { return std::pow(1 + x, -0.5); }, 0.0, kInf);
  CHECK(b.sup == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b.argsup < 1e-5);
  const SupResult c = sup_search([](double x) { return std::sqrt(x) * std::exp(-x); }, 0.0, kInf);
  CHECK(c.sup == doctest::Approx(std::sqrt(0.5) * std::exp(-0.5)).epsilon(1e-10));
  CHECK(c.argsup == doctest::Approx(0.5).epsilon(1e-5));
  const SupResult d = sup_search([](double) { return std::nan(""); }, 0.0, 1.0);
  CHECK_FALSE(d.defined);
}

TEST_CASE("log-space sums") {
  LogSum s;
  s.add(std::log(2.0));
  s.add(std::log(3.0));
  CHECK(std::exp(s.value()) == doctest::Approx(5.0));
  CHECK(log_add(-kInf, 1.0) == 1.0);
  CHECK(std::exp(log_sub(std::log(5.0), std::log(3.0))) == doctest::Approx(2.0));
}

TEST_CASE("cumulative tables agree with closed forms") {
  // with t = s^2 the integrand becomes 2 (1+s^2)^-2
  const WeightExpr w = parse_weight("t^-0.5 * (1+t)^-2");
  const Cumulative c(w, 1.0, Cumulative::Options{});
  auto head = [](double t) { return std::sqrt(t) / (1 + t) + std::atan(std::sqrt(t)); };
  auto tail = [](double t) { return std::atan(1 / std::sqrt(t)) - std::sqrt(t) / (1 + t); };
  for (double t : {1e-5, 0.3, 1.0, 40.0, 1e5}) {
    INFO("t = " << t);
    CHECK(ref::rel_close(std::exp(c.log_from_zero(t)), head(t), 1e-9));
    CHECK(ref::rel_close(std::exp(c.log_to_inf(t)), tail(t), 1e-9));
  }
  CHECK(ref::rel_close(std::exp(c.log_between(0.5, 3.0)), head(3.0) - head(0.5), 1e-9));
  auto f = [](double t) { return std::pow(t, -0.5) * std::pow(1 + t, -2); };
  CHECK(ref::rel_close(ref::integrate(f, 40.0, ref::inf), tail(40.0), 1e-9));
}
