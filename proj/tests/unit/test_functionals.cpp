// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>

#include "functionals.hpp"

using namespace morrey;

namespace {

ReducedProblem problem(ExponentQuad e, const char* v2, const char* w1, const char* w2, const char* v1 = "1",
                       int dim = 1) {
  return reduce_problem(dim, e, {dim, parse_weight(v1), {}}, {dim, parse_weight(v2), {}}, parse_weight(w1),
                        parse_weight(w2));
}

// hypotheses of the four theorems, written out independently of classify()
std::vector<std::string> matching(double p1, double p2, double q1, double q2) {
  std::vector<std::string> m;
  if (q1 <= p2 && p2 < std::min(p1, q2)) m.push_back(p1 <= q2 ? "A_i" : "A_ii");
  if (p2 < std::min({p1, q1, q2})) {
    if (std::max(p1, q1) <= q2) m.push_back("B_i");
    if (p1 <= q2 && q2 < q1) m.push_back("B_ii");
    if (q1 <= q2 && q2 < p1) m.push_back("B_iii");
    if (q2 < std::min(p1, q1)) m.push_back("B_iv");
  }
  if (q1 <= p1 && p1 == p2 && p2 < q2) m.push_back("C");
  if (p1 == p2 && p1 < std::min(q1, q2)) m.push_back(q1 <= q2 ? "D_i" : "D_ii");
  return m;
}

}  // namespace

TEST_CASE("classification of the reference quadruples") {
  CHECK(classify(ExponentQuad::make(2, 1, 1, 2)).name() == "A_i");
  CHECK(classify(ExponentQuad::make(4, 1, 1, 2)).name() == "A_ii");
  CHECK(classify(ExponentQuad::make(1, 1, 2, 3)).name() == "D_i");
  CHECK(classify(ExponentQuad::make(1, 1, 1, 2)).name() == "C");
  CHECK(classify(ExponentQuad::make(2, 1, 2, 3)).name() == "B_i");
  CHECK(classify(ExponentQuad::make(1, 2, 1, 3)).name() == "Unsupported(p2>p1)");
  CHECK_FALSE(classify(ExponentQuad::make(1, 1, 1, 1)).supported());
}

TEST_CASE("classifier is total and agrees with the hypotheses on a lattice") {
  const double grid[] = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0};
  std::map<std::string, int> counts;
  int total = 0;
  for (double p1 : grid)
    for (double p2 : grid)
      for (double q1 : grid)
        for (double q2 : grid) {
          ++total;
          const TheoremCase c = classify(ExponentQuad::make(p1, p2, q1, q2));
          const auto m = matching(p1, p2, q1, q2);
          REQUIRE(m.size() <= 1);
          if (c.supported()) {
            REQUIRE(m.size() == 1);
            CHECK(m[0] == c.name());
          } else {
            CHECK(m.empty());
          }
          ++counts[c.supported() ? c.name() : "Unsupported"];
        }
  CHECK(total == 10000);
  for (const char* t : {"A_i", "A_ii", "B_i", "B_ii", "B_iii", "B_iv", "C", "D_i", "D_ii"}) CHECK(counts[t] > 0);
}

TEST_CASE("component lists") {
  CHECK(classify(ExponentQuad::make(2, 1, 2, 3)).components() == std::vector<int>{3, 4});
  CHECK(classify(ExponentQuad::make(2, 1, 3, 2.5)).components() == std::vector<int>{3, 5, 6});
  CHECK(classify(ExponentQuad::make(3, 1, 2, 2.5)).components() == std::vector<int>{4, 7, 8});
  CHECK(classify(ExponentQuad::make(3, 1, 3, 2)).components() == std::vector<int>{6, 7, 9});
  CHECK(classify(ExponentQuad::make(1, 1, 2, 3)).components() == std::vector<int>{11, 12});
  CHECK(classify(ExponentQuad::make(1, 1, 3, 2)).components() == std::vector<int>{11, 13, 14});
}

TEST_CASE("admissibility") {
  const ExponentQuad bi = ExponentQuad::make(2, 1, 2, 3);
  const Admissibility ok = check_admissibility(classify(bi), problem(bi, "1", "(1+t)^-2", "(1+t)^-2"));
  CHECK(ok.passed);

  const Admissibility bad = check_admissibility(classify(bi), problem(bi, "1", "(1+t)^-2", "1"));
  CHECK_FALSE(bad.passed);
  CHECK(bad.failure().find("infinite tail") != std::string::npos);

  const ExponentQuad di = ExponentQuad::make(1, 1, 2, 3);
  const Admissibility jump =
      check_admissibility(classify(di), problem(di, "{1 on (0,1); 2 on (1,inf)}", "(1+t)^-2", "(1+t)^-2"));
  CHECK_FALSE(jump.passed);
  CHECK(jump.failure().find("continuous") != std::string::npos);
}

TEST_CASE("closed-form anchors") {
  const ExponentQuad c = ExponentQuad::make(1, 1, 1, 2);
  const FunctionalValue i10 = eval_functional(10, problem(c, "1", "(1+t)^-2", "(1+t)^-2"));
  CHECK(i10.value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
  CHECK(i10.finite);

  const ExponentQuad a = ExponentQuad::make(2, 1, 1, 2);
  const FunctionalValue i1 = eval_functional(1, problem(a, "1", "exp(-1*t)", "exp(-1*t)"));
  CHECK(i1.value == doctest::Approx(std::sqrt(0.5) * std::exp(-0.5)).epsilon(1e-6));

  const FunctionalValue est = embedding_norm_estimate(classify(c), problem(c, "1", "(1+t)^-2", "(1+t)^-2"));
  CHECK(est.value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
  REQUIRE(est.components.size() == 1);
  CHECK(est.components[0].k == 10);

  const FunctionalValue ai = embedding_norm_estimate(classify(a), problem(a, "1", "exp(-1*t)", "exp(-1*t)"));
  CHECK(ai.value == doctest::Approx(std::sqrt(0.5) * std::exp(-0.5)).epsilon(1e-6));
}

TEST_CASE("a divergent tail gives an infinite estimate") {
  const ExponentQuad a = ExponentQuad::make(2, 1, 1, 2);
  const FunctionalValue v = embedding_norm_estimate(classify(a), problem(a, "t^2", "(1+t)^-2", "(1+t)^-2"));
  CHECK_FALSE(v.finite);
  CHECK(std::isinf(v.value));
  REQUIRE_FALSE(v.components.empty());
  CHECK_FALSE(v.components[0].divergence.empty());
}

TEST_CASE("sums over components") {
  const ExponentQuad e = ExponentQuad::make(3, 1, 2, 2.5);
  const FunctionalValue v = embedding_norm_estimate(classify(e), problem(e, "(1+t)^-2", "(1+t)^-2", "(1+t)^-2"));
  REQUIRE(v.components.size() == 3);
  double s = 0.0;
  for (const auto& c : v.components) s += c.value;
  CHECK(v.value == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("scaling v2 scales I1 exactly") {
  const ExponentQuad a = ExponentQuad::make(2, 1, 1, 2);
  const double base = eval_functional(1, problem(a, "1", "exp(-1*t)", "exp(-1*t)")).value;
  const double scaled = eval_functional(1, problem(a, "3.5", "exp(-1*t)", "exp(-1*t)")).value;
  CHECK(scaled == doctest::Approx(3.5 * base).epsilon(1e-9));
}

TEST_CASE("enlarging v2 never decreases a functional") {
  const ExponentQuad b = ExponentQuad::make(2, 1, 3, 2.5);
  const char* nested[] = {"(1+t)^-3", "(1+t)^-2", "(1+t)^-1.5"};
  for (int k : {3, 5, 6}) {
    double prev = 0.0;
    for (const char* v2 : nested) {
      const double x = eval_functional(k, problem(b, v2, "(1+t)^-2", "(1+t)^-2")).value;
      CHECK(x >= prev * (1 - 1e-9));
      prev = x;
    }
  }
}

TEST_CASE("printed and corrected variants are both available") {
  const ExponentQuad e = ExponentQuad::make(2, 1, 2, 3);
  const ReducedProblem r = problem(e, "(1+t)^-2", "(1+t)^-2", "(1+t)^-2");
  FunctionalSettings printed;
  printed.variant[4] = Variant::printed;
  const FunctionalValue a = eval_functional(4, r);
  const FunctionalValue b = eval_functional(4, r, printed);
  CHECK(a.components[0].variant == Variant::corrected);
  CHECK(b.components[0].variant == Variant::printed);
  CHECK(has_variants(4));
  CHECK_FALSE(has_variants(3));
}
