// SPDX-License-Identifier: Apache-2.0

#include "reduction.hpp"

#include <algorithm>
#include <numeric>

namespace morrey {

// ---------------------------------------------------------------------------
// RadialTestFunction

RadialTestFunction::RadialTestFunction(std::vector<double> k, std::vector<double> v)
    : knots(std::move(k)), values(std::move(v)) {
  if (knots.size() != values.size() + 1) throw DomainError("test function needs one more knot than values");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i] < knots[i + 1])) throw DomainError("test function knots must increase");
  if (!knots.empty() && !(knots.front() > 0.0)) throw DomainError("test function knots must be positive");
  for (double x : values)
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("test function values must be finite and >= 0");
}

RadialTestFunction RadialTestFunction::indicator(double a, double b) { return {{a, b}, {1.0}}; }

double RadialTestFunction::eval(double t) const {
  if (knots.empty() || !(t > knots.front()) || !(t < knots.back())) return 0.0;
  const auto it = std::upper_bound(knots.begin(), knots.end(), t);
  return values[static_cast<std::size_t>(it - knots.begin()) - 1];
}

bool RadialTestFunction::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](double x) { return x == 0.0; });
}

double RadialTestFunction::integral_pow(double t, double r) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (knots[j] >= t) break;
    if (values[j] == 0.0) continue;
    acc += std::pow(values[j], r) * (std::min(t, knots[j + 1]) - knots[j]);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Sphere

SphereFunctionals sphere_functionals(const AngularWeight& a, int dim, double r) {
  if (dim < 1) throw DomainError("dimension must be >= 1");
  return {a.integral_pow(dim, r), a.max()};
}

WeightExpr reduce_subunity(const RnWeight& v, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("sub-unity reduction needs 0 < p < 1");
  const double c = std::pow(v.angular.integral_pow(v.dim, 1.0 / (1.0 - p)), 1.0 - p);
  return v.radial.times(WeightExpr::power(static_cast<double>(v.dim - 1) * (1.0 - p), c));
}

WeightExpr reduce_unity(const RnWeight& v) { return v.radial.scaled(v.angular.max()); }

// ---------------------------------------------------------------------------
// Lifts

LiftedFunction::LiftedFunction(RadialTestFunction g, LiftKind kind, RnWeight v, double p, std::vector<double> h)
    : g_(std::move(g)), kind_(kind), v_(std::move(v)), p_(p), h_(std::move(h)) {
  if (kind_ == LiftKind::subunity) log_norm_ = std::log(v_.angular.integral_pow(v_.dim, 1.0 / (1.0 - p_)));
}

double LiftedFunction::h(std::span<const double> direction) const {
  if (h_.empty()) return 1.0 / sphere_measure(v_.dim);
  const auto& grid = cached_sphere_grid(v_.dim, h_.size());
  return h_[grid.locate(direction)];
}

double LiftedFunction::eval(std::span<const double> x) const {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double r = std::sqrt(r2);
  if (!(r > 0.0)) return 0.0;
  const double g = g_.eval(r);
  if (g == 0.0) return 0.0;
  std::vector<double> dir(x.begin(), x.end());
  for (auto& c : dir) c /= r;
  const double log_r = (1.0 - v_.dim) * std::log(r);
  if (kind_ == LiftKind::unity) return h(dir) * g * std::exp(log_r);
  // radial parts of v cancel between numerator and the sphere integral
  const double la = std::log(v_.angular.value_at(dir)) / (1.0 - p_);
  return g * std::exp(la - log_norm_ + log_r);
}

LiftedFunction lift_subunity(const RadialTestFunction& g, const RnWeight& v, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("sub-unity lift needs 0 < p < 1");
  return LiftedFunction(g, LiftKind::subunity, v, p, {});
}

LiftedFunction lift_unity(const RadialTestFunction& g, const RnWeight& v, double eps) {
  const double top = v.angular.max();
  if (!(eps > 0.0)) eps = 1e-3 * top;
  if (v.angular.is_constant()) return LiftedFunction(g, LiftKind::unity, v, 1.0, {});
  const auto& vals = v.angular.values();
  const auto& grid = cached_sphere_grid(v.angular.grid_dim(), vals.size());
  std::vector<double> h(vals.size(), 0.0);
  double mass = 0.0;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] > top - eps) {
      h[k] = 1.0;
      mass += grid.weights[k];
    }
  }
  if (!(mass > 0.0)) throw DomainError("angular grid cannot isolate the supremum set");
  for (auto& x : h) x /= mass;
  return LiftedFunction(g, LiftKind::unity, v, 1.0, std::move(h));
}

// ---------------------------------------------------------------------------
// LM_{p,p} = L_p(u)

double LebesgueWeight::eval(std::span<const double> x) const {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double r = std::sqrt(r2);
  std::vector<double> dir(x.begin(), x.end());
  for (auto& c : dir) c /= r;
  return radial(r) * angular.value_at(dir);
}

namespace {

// Closed-form (int_t^inf w^p)^{1/p} for a single-piece pure power / (1+t) / exp weight.
std::optional<WeightExpr> closed_tail(const WeightExpr& w, double p) {
  if (w.is_piecewise()) return std::nullopt;
  const ProductShape s = w.pieces().front().body.pow(p).shape();
  using K = Factor::Kind;
  std::vector<Factor> f;
  if (s.is_pure_power() && s.power < -1.0) {
    const double e = s.power + 1.0;
    f = {{K::constant, std::exp(s.log_c) / -e}, {K::power, e}};
  } else if (s.is_pure_one_plus() && s.one_plus < -1.0) {
    const double e = s.one_plus + 1.0;
    f = {{K::constant, std::exp(s.log_c) / -e}, {K::one_plus, e}};
  } else if (s.is_pure_exp() && s.exp > 0.0) {
    f = {{K::constant, std::exp(s.log_c) / s.exp}, {K::exp, s.exp}};
  } else {
    return std::nullopt;
  }
  return WeightExpr(Product(std::move(f)).simplified()).pow(1.0 / p);
}

}  // namespace

LebesgueWeight morrey_to_lebesgue(const RnWeight& v, const WeightExpr& w, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("p must lie in (0, inf)");
  const ProductShape tail = w.pieces().back().body.pow(p).shape();
  if (!tail.integrable_at_infinity())
    throw DegenerateError("int_t^inf w^p diverges: the space contains only the zero function");
  LebesgueWeight u;
  u.dim = v.dim;
  u.angular = v.angular;
  if (auto c = closed_tail(w, p)) {
    u.radial_closed = v.radial.times(*c);
    const WeightExpr r = *u.radial_closed;
    u.log_radial = [r](double t) { return r.log_eval(t); };
  } else {
    auto cum = std::make_shared<Cumulative>(w, p);
    const WeightExpr rho = v.radial;
    u.log_radial = [cum, rho, p](double t) { return rho.log_eval(t) + cum->log_to_inf(t) / p; };
  }
  return u;
}

ComplementaryPair complementary_transform(const RnWeight& v, const WeightExpr& w, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("exponents must be positive");
  RnWeight vt = v;
  vt.radial = v.radial.inverted().times(WeightExpr::power(-2.0 * v.dim / p));
  const WeightExpr wt = w.inverted().times(WeightExpr::power(-2.0 / q));
  return {vt, wt};
}

// ---------------------------------------------------------------------------
// Reduced problem

bool exponents_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

ReducedProblem reduce_problem(int dim, const ExponentQuad& e, const RnWeight& v1, const RnWeight& v2,
                              const WeightExpr& w1, const WeightExpr& w2) {
  if (e.p2 > e.p1 && !exponents_equal(e.p1, e.p2))
    throw UnsupportedError("p2 > p1 is outside the reduction");
  ReducedProblem r;
  r.e = e;
  r.dim = dim;
  r.unity = exponents_equal(e.p1, e.p2);
  r.p = r.unity ? 1.0 : e.p();
  r.q = e.q();
  r.theta = e.theta();
  r.u = w2.pow(e.q2);
  r.w = w1.pow(e.q1);
  RnWeight a1 = v1, a2 = v2;
  a1.dim = a2.dim = dim;
  // V = (v2/v1)^{p2}
  const RnWeight ratio = a2.times(a1.pow(-1.0));
  const RnWeight big_v = ratio.pow(e.p2);
  r.radial_ratio = ratio.radial;
  r.log_angular_ratio = std::log(ratio.angular.max());
  r.ratio_continuous = r.radial_ratio.is_continuous() &&
                       (ratio.angular.is_constant() || ratio.angular.max() == ratio.angular.min());
  if (r.unity) {
    r.vtilde = reduce_unity(big_v);
  } else {
    r.vtilde = reduce_subunity(big_v, r.p);
    r.dens_v = r.vtilde.pow(1.0 / (1.0 - r.p));
  }
  return r;
}

}  // namespace morrey
