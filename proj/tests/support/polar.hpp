// SPDX-License-Identifier: Apache-2.0
//
// Direct n-dimensional integration over balls B(0,t) in polar coordinates,
// used to check the radial reduction from the outside.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "reduction.hpp"
#include "support/reference.hpp"

namespace polar {

namespace detail {

// radial cut points: knots of g inside (0, t)
inline std::vector<double> radial_cuts(const morrey::RadialTestFunction& g, double t) {
  std::vector<double> c{0.0};
  for (double k : g.knots)
    if (k > 0.0 && k < t) c.push_back(k);
  c.push_back(t);
  return c;
}

// F(x) integrated over B(0,t); angular cells on the circle are `arcs` equal arcs
template <class F>
double integrate_ball(F&& fn, const morrey::RadialTestFunction& g, double t, int dim, int arcs) {
  const std::vector<double> rc = radial_cuts(g, t);
  const double tol = 1e-12;
  if (dim == 1) {
    return ref::integrate_split(
        [&](double r) {
          const double a[] = {r}, b[] = {-r};
          return fn(a) + fn(b);
        },
        rc, tol);
  }
  if (dim == 2) {
    const double h = 2.0 * std::numbers::pi / arcs;
    return ref::integrate_split(
        [&](double r) {
          double s = 0.0;
          for (int k = 0; k < arcs; ++k)
            s += ref::integrate(
                [&](double phi) {
                  const double x[] = {r * std::cos(phi), r * std::sin(phi)};
                  return fn(x);
                },
                k * h, (k + 1) * h, tol);
          return s * r;
        },
        rc, tol);
  }
  // dim 3, angular part constant along the sphere
  return ref::integrate_split(
      [&](double r) {
        return r * r * ref::integrate(
                           [&](double th) {
                             return std::sin(th) * ref::integrate(
                                                       [&](double phi) {
                                                         const double x[] = {r * std::sin(th) * std::cos(phi),
                                                                             r * std::sin(th) * std::sin(phi),
                                                                             r * std::cos(th)};
                                                         return fn(x);
                                                       },
                                                       0.0, 2.0 * std::numbers::pi, tol);
                           },
                           0.0, std::numbers::pi, tol);
      },
      rc, tol);
}

inline int arcs_of(const morrey::RnWeight& v) {
  return v.angular.is_constant() ? 1 : static_cast<int>(v.angular.values().size());
}

}  // namespace detail

/// int_{B(0,t)} f
inline double ball_mass(const morrey::LiftedFunction& f, const morrey::RnWeight& v, double t, int dim) {
  return detail::integrate_ball([&](const double* x) { return f.eval(std::span<const double>(x, dim)); },
                                f.profile(), t, dim, detail::arcs_of(v));
}

/// int_{B(0,t)} f^r v
inline double ball_weighted(const morrey::LiftedFunction& f, const morrey::RnWeight& v, double r, double t, int dim) {
  return detail::integrate_ball(
      [&](const double* x) {
        const std::span<const double> s(x, dim);
        const double fx = f.eval(s);
        return fx > 0.0 ? std::pow(fx, r) * v.eval(s) : 0.0;
      },
      f.profile(), t, dim, detail::arcs_of(v));
}

/// int_0^t g^r vt for a step function g
inline double reduced_integral(const morrey::RadialTestFunction& g, const morrey::WeightExpr& vt, double r, double t) {
  double s = 0.0;
  for (std::size_t j = 0; j < g.values.size(); ++j) {
    const double a = g.knots[j], b = std::min(g.knots[j + 1], t);
    if (!(b > a) || g.values[j] == 0.0) continue;
    s += std::pow(g.values[j], r) * ref::integrate([&](double x) { return vt.eval(x); }, a, b);
  }
  return s;
}

}  // namespace polar
