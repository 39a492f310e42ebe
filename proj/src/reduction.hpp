// SPDX-License-Identifier: Apache-2.0
//
// Radial reduction of n-dimensional Morrey-type quotients, the test
// functions that realize it, and the LM_{p,p} / complementary rewrites.

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "quadrature.hpp"
#include "weights.hpp"

namespace morrey {

/// Nonnegative step function on (0, inf): values[j] on (knots[j], knots[j+1]),
/// zero outside (knots.front(), knots.back()).
struct RadialTestFunction {
  std::vector<double> knots;
  std::vector<double> values;

  RadialTestFunction() = default;
  RadialTestFunction(std::vector<double> k, std::vector<double> v);

  static RadialTestFunction indicator(double a, double b);

  std::size_t cells() const { return values.size(); }
  double eval(double t) const;
  bool is_zero() const;
  /// int_0^t g^r
  double integral_pow(double t, double r) const;
};

struct SphereFunctionals {
  double integral;  // int_{S^{n-1}} a^r dsigma
  double esssup;
};
SphereFunctionals sphere_functionals(const AngularWeight& a, int dim, double r);

/// (int_S v(ts)^{1/(1-p)} dsigma)^{1-p} t^{(n-1)(1-p)}, 0 < p < 1.
WeightExpr reduce_subunity(const RnWeight& v, double p);
/// esssup_s v(ts).
WeightExpr reduce_unity(const RnWeight& v);

enum class LiftKind { subunity, unity };

/// An f on R^n built from a radial profile g so that its ball integrals
/// reproduce the one-dimensional ones.
class LiftedFunction {
 public:
  LiftedFunction(RadialTestFunction g, LiftKind kind, RnWeight v, double p, std::vector<double> h);

  const RadialTestFunction& profile() const { return g_; }
  LiftKind kind() const { return kind_; }
  double eval(std::span<const double> x) const;
  /// angular density (unity lifts), sums to 1 against the sphere grid
  double h(std::span<const double> direction) const;

 private:
  RadialTestFunction g_;
  LiftKind kind_;
  RnWeight v_;
  double p_;
  std::vector<double> h_;  // per grid node; empty means uniform 1/sigma
  double log_norm_ = 0.0;  // log int_S a^{1/(1-p)} for subunity
};

LiftedFunction lift_subunity(const RadialTestFunction& g, const RnWeight& v, double p);
/// eps defaults to 1e-3 * esssup a when <= 0 is passed.
LiftedFunction lift_unity(const RadialTestFunction& g, const RnWeight& v, double eps = 0.0);

/// u(x) = v(x) ||w||_{p,(|x|,inf)}; radial part kept as closed form when the
/// tail has one.
struct LebesgueWeight {
  int dim = 1;
  AngularWeight angular;
  std::optional<WeightExpr> radial_closed;
  LogFn log_radial;

  double eval(std::span<const double> x) const;
  double radial(double t) const { return std::exp(log_radial(t)); }
};
LebesgueWeight morrey_to_lebesgue(const RnWeight& v, const WeightExpr& w, double p);

struct ComplementaryPair {
  RnWeight v;
  WeightExpr w;
};
/// x = y/|y|^2: v~(y) = v(y/|y|^2)|y|^{-2n/p}, w~(t) = t^{-2/q} w(1/t).
ComplementaryPair complementary_transform(const RnWeight& v, const WeightExpr& w, double p, double q);

/// The one-dimensional problem behind an embedding LM(v1,w1) -> LM(v2,w2):
///   (int (int_0^t g^p vt)^{q/p} u)^{1/q}  vs  (int (int_0^t g)^theta w)^{1/theta},
/// norm of the embedding = sup of their ratio to the power 1/p1.
struct ReducedProblem {
  ExponentQuad e;
  int dim = 1;
  bool unity = false;     // p1 == p2
  WeightExpr vtilde;      // reduced weight for g^p
  WeightExpr u;           // w2^{q2}
  WeightExpr w;           // w1^{q1}
  double p = 1, q = 1, theta = 1;
  /// vtilde^{1/(1-p)}, the polar density of the annulus integral (p < 1)
  WeightExpr dens_v;
  /// v2/v1 split as rho2/rho1 and log esssup a2/a1
  double log_angular_ratio = 0.0;
  WeightExpr radial_ratio;
  bool ratio_continuous = true;
};

bool exponents_equal(double a, double b);

ReducedProblem reduce_problem(int dim, const ExponentQuad& e, const RnWeight& v1, const RnWeight& v2,
                              const WeightExpr& w1, const WeightExpr& w2);

}  // namespace morrey
