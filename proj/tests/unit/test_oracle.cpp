// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "functionals.hpp"
#include "oracle.hpp"
#include "support/reference.hpp"

using namespace morrey;

namespace {

SpacePair spaces(ExponentQuad e, const char* v2, const char* w1, const char* w2, const char* v1 = "1", int dim = 1) {
  return SpacePair::make(dim, e, {dim, parse_weight(v1), {}}, {dim, parse_weight(v2), {}}, parse_weight(w1),
                         parse_weight(w2));
}

// (int_0^inf (int_{B(0,t)} f^p v^p)^{q/p} w^q dt)^{1/q} for f = g(|x|), v = rho(|x|)
double direct_norm(const RadialTestFunction& g, int dim, const std::function<double(double)>& rho,
                   const std::function<double(double)>& w, double p, double q) {
  const double area = ref::sphere_area(dim);
  auto inner = [&](double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.values.size(); ++j) {
      const double a = g.knots[j], b = std::min(g.knots[j + 1], t);
      if (b <= a || g.values[j] == 0.0) continue;
      s += std::pow(g.values[j], p) *
           ref::integrate([&](double r) { return std::pow(rho(r), p) * std::pow(r, dim - 1); }, a, b);
    }
    return area * s;
  };
  std::vector<double> cuts{0.0};
  for (double k : g.knots) cuts.push_back(k);
  double s = ref::integrate_split([&](double t) { return std::pow(inner(t), q / p) * std::pow(w(t), q); }, cuts, 1e-11);
  s += ref::integrate([&](double t) { return std::pow(inner(t), q / p) * std::pow(w(t), q); }, cuts.back(), ref::inf,
                      1e-11);
  return std::pow(s, 1.0 / q);
}

}  // namespace

TEST_CASE("norm of an indicator") {
  const RadialTestFunction g = RadialTestFunction::indicator(1e-12, 1.0);
  const double one_d = lm_norm(g, WeightExpr(), parse_weight("(1+t)^-2"), 1.0, 1.0);
  CHECK(one_d == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  const RnWeight v{1, WeightExpr(), {}};
  const double ball = lm_norm(g, v, parse_weight("(1+t)^-2"), 1.0, 1.0);
  CHECK(ball == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
  CHECK(lm_norm(RadialTestFunction({1.0, 2.0}, {0.0}), v, parse_weight("(1+t)^-2"), 1.0, 1.0) == 0.0);
}

TEST_CASE("norms agree with nested reference quadrature") {
  const RadialTestFunction g({0.05, 0.4, 1.0, 3.0}, {2.0, 0.5, 1.5});
  for (int dim : {1, 2, 3}) {
    const RnWeight v{dim, parse_weight("(1+t)^-1"), {}};
    const double p = 1.5, q = 2.5;
    const double got = lm_norm(g, v, parse_weight("exp(-1*t)"), p, q);
    const double want = direct_norm(
        g, dim, [](double r) { return 1.0 / (1.0 + r); }, [](double t) { return std::exp(-t); }, p, q);
    CHECK(got == doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("Fubini form of the theta = 1 denominator") {
  const RadialTestFunction g({0.1, 0.5, 2.0, 7.0}, {1.0, 3.0, 0.25});
  const double got = lm_norm(g, WeightExpr(), parse_weight("(1+t)^-2"), 1.0, 1.0);
  double want = 0.0;
  for (std::size_t j = 0; j < g.values.size(); ++j)
    want += g.values[j] * ref::integrate([](double s) { return 1.0 / (1.0 + s); }, g.knots[j], g.knots[j + 1]);
  CHECK(got == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("quotient basics") {
  const SpacePair same = spaces(ExponentQuad::make(1, 1, 1, 2), "1", "(1+t)^-2", "(1+t)^-2");
  SpacePair id = same;
  id.s2 = id.s1;
  const RadialTestFunction g({0.1, 1.0, 4.0}, {1.0, 0.3});
  CHECK(rayleigh(g, id) == doctest::Approx(1.0).epsilon(1e-14));

  const double r = rayleigh(RadialTestFunction::indicator(1e-12, 1.0), same);
  CHECK(r > 0.0);
  CHECK(std::isfinite(r));
  CHECK(r <= 1.0 / std::sqrt(3.0) * 10);

  const RadialTestFunction g7({0.1, 1.0, 4.0}, {7.0, 2.1});
  CHECK(rayleigh(g7, same) == doctest::Approx(rayleigh(g, same)).epsilon(1e-12));
  CHECK(std::isnan(rayleigh(RadialTestFunction({1.0, 2.0}, {0.0}), same)));
}

TEST_CASE("search on identical spaces") {
  SpacePair sp = spaces(ExponentQuad::make(2, 2, 3, 3), "1", "(1+t)^-2", "(1+t)^-2");
  SearchConfig cfg;
  cfg.knots = 16;
  cfg.restarts = 1;
  const SearchResult r = best_constant_search(sp, cfg);
  REQUIRE(r.defined);
  CHECK(r.lower_bound >= 1.0 - 1e-6);
  CHECK(r.lower_bound <= 1.0 + 1e-12);
}

TEST_CASE("search brackets the anchors and stores its argmax") {
  SearchConfig cfg;
  cfg.knots = 32;
  cfg.restarts = 2;
  {
    const SpacePair sp = spaces(ExponentQuad::make(1, 1, 1, 2), "1", "(1+t)^-2", "(1+t)^-2");
    const SearchResult r = best_constant_search(sp, cfg, {1e-4});
    const double i10 = 1.0 / std::sqrt(3.0);
    CHECK(r.lower_bound <= 10 * i10);
    CHECK(r.lower_bound >= i10 / 10);
    CHECK(rayleigh(r.g, sp) == doctest::Approx(r.lower_bound).epsilon(1e-9));
    CHECK(r.rng == "mt19937_64");
  }
  {
    const SpacePair sp = spaces(ExponentQuad::make(2, 1, 1, 2), "1", "exp(-1*t)", "exp(-1*t)");
    const SearchResult r = best_constant_search(sp, cfg, {0.5});
    const double i1 = std::sqrt(0.5) * std::exp(-0.5);
    CHECK(r.lower_bound <= 10 * i1);
    CHECK(r.lower_bound >= i1 / 10);
    CHECK(rayleigh(r.g, sp) == doctest::Approx(r.lower_bound).epsilon(1e-9));
    CHECK(*std::max_element(r.g.values.begin(), r.g.values.end()) == 1.0);
  }
}

TEST_CASE("search is reproducible and never below its seeds") {
  const SpacePair sp = spaces(ExponentQuad::make(2, 1, 2, 3), "(1+t)^-2", "(1+t)^-2", "(1+t)^-2");
  SearchConfig cfg;
  cfg.knots = 24;
  cfg.restarts = 3;
  cfg.seed = 42;
  const SearchResult a = best_constant_search(sp, cfg);
  const SearchResult b = best_constant_search(sp, cfg);
  CHECK(a.lower_bound == b.lower_bound);
  CHECK(a.g.values == b.g.values);
  // the full-support indicator is one of the seeds
  const double whole = rayleigh(RadialTestFunction::indicator(cfg.lo, cfg.hi), sp);
  CHECK(a.lower_bound >= whole);
  SearchConfig more = cfg;
  more.sweeps = 0;
  CHECK(a.lower_bound >= best_constant_search(sp, more).lower_bound);
}

TEST_CASE("search argument checks") {
  const SpacePair sp = spaces(ExponentQuad::make(1, 1, 1, 2), "1", "(1+t)^-2", "(1+t)^-2");
  SearchConfig cfg;
  cfg.knots = 0;
  CHECK_THROWS_AS((void)best_constant_search(sp, cfg), DomainError);
  cfg.knots = 8;
  cfg.lo = 2;
  cfg.hi = 1;
  CHECK_THROWS_AS((void)best_constant_search(sp, cfg), DomainError);
}

TEST_CASE("divergence witness grows past the bound") {
  const SpacePair sp = spaces(ExponentQuad::make(2, 1, 1, 2), "t^2", "(1+t)^-2", "(1+t)^-2");
  SearchConfig cfg;
  cfg.knots = 16;
  const SearchResult r = divergence_witness(sp, cfg);
  REQUIRE(r.defined);
  REQUIRE_FALSE(r.widening.empty());
  CHECK(r.widening.back().log_lower_bound > std::log(1e3));
  CHECK(verify_equivalence(kInf, r, 10.0).kind == VerdictKind::pass_divergent);
}

TEST_CASE("verdicts") {
  SearchResult l;
  l.defined = true;
  l.lower_bound = 0.41;
  l.log_lower_bound = std::log(0.41);
  const Verdict a = verify_equivalence(0.577, l, 10.0);
  CHECK(a.kind == VerdictKind::pass);
  CHECK(a.name() == "PASS");

  l.lower_bound = 0.01;
  l.log_lower_bound = std::log(0.01);
  const Verdict b = verify_equivalence(5.0, l, 10.0);
  CHECK(b.kind == VerdictKind::fail);
  CHECK(b.ratio == doctest::Approx(500.0));

  const Verdict c = verify_equivalence(kInf, l, 10.0);
  CHECK(c.kind == VerdictKind::fail);

  l.widening = {{1e-8, 1e8, std::log(2e3)}};
  CHECK(verify_equivalence(kInf, l, 10.0).name() == "PASS-divergent");

  CHECK(verify_equivalence(1.0, SearchResult{}, 10.0).kind == VerdictKind::undefined);
  CHECK_THROWS_AS((void)verify_equivalence(1.0, l, 1.0), DomainError);
}
