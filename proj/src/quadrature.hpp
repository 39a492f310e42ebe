// SPDX-License-Identifier: Apache-2.0
//
// Integrals, tail norms and suprema on (0, inf).
//
// Everything that feeds the characterization functionals runs in log space:
// tails of exponential weights underflow long before the suprema of their
// ratios are reached.

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <limits>
#include <string>
#include <vector>

#include "weights.hpp"

namespace morrey {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadOptions {
  double rel_tol = 1e-9;
  int max_level = 8;    // tanh-sinh halvings of the step
  int max_depth = 10;   // adaptive bisection depth on failure
};

struct QuadResult {
  double value = 0.0;           // +inf when certified divergent
  double abs_error = 0.0;
  bool converged = true;
  bool exact = false;           // closed form used
  std::string certificate;      // divergence reason, empty otherwise

  bool divergent() const { return std::isinf(value); }
};

/// Log of a nonnegative integral. log_value = +inf means divergent,
/// -inf means zero.
struct LogQuad {
  double log_value = -kInf;
  double rel_error = 0.0;
  bool converged = true;
};

using LogFn = std::function<double(double)>;

/// Running log-sum-exp accumulator.
class LogSum {
 public:
  void add(double l) {
    if (std::isnan(l) || l == -kInf) return;
    if (l == kInf) {
      m_ = kInf;
      return;
    }
    if (m_ == kInf) return;
    if (l <= m_) {
      s_ += std::exp(l - m_);
    } else {
      s_ = s_ * std::exp(m_ - l) + 1.0;
      m_ = l;
    }
  }
  double value() const {
    if (m_ == kInf) return kInf;
    if (s_ == 0.0) return -kInf;
    return m_ + std::log(s_);
  }

 private:
  double m_ = -kInf;
  double s_ = 0.0;
};

double log_add(double a, double b);
/// log(e^a - e^b) for a >= b.
double log_sub(double a, double b);

/// Adaptive tanh-sinh quadrature of exp(logf) over (a, b), b may be +inf;
/// (a, inf) is mapped by t = a + u/(1-u).
LogQuad integrate_log(const LogFn& logf, double a, double b, const QuadOptions& opts = {});

/// int_a^b w(t)^r dt. Divergence is decided from the endpoint asymptotics of
/// the grammar (power-tail minorant), never from refinement timeouts.
QuadResult integrate_weighted(const WeightExpr& w, double r, double a, double b,
                              const QuadOptions& opts = {});

/// log of int_a^b w^r, same decisions as integrate_weighted.
LogQuad log_integrate_weighted(const WeightExpr& w, double r, double a, double b,
                               const QuadOptions& opts = {});

/// (int_t^inf w^q)^{1/q}.
QuadResult tail_norm(const WeightExpr& w, double q, double t, const QuadOptions& opts = {});

struct SupOptions {
  int per_decade = 12;
  double lo = 1e-6;   // grid extent on (0, inf)
  double hi = 1e6;
  int candidates = 3;
  double bracket_tol = 1e-7;  // in log-coordinates
};

struct SupResult {
  double argsup = 0.0;
  double sup = -kInf;
  double bracket = 0.0;
  int evaluations = 0;
  bool defined = false;  // some evaluation was not NaN
};

/// Supremum of f over (a, b): geometric grid on a compactified coordinate,
/// then golden-section refinement around the best candidates.
SupResult sup_search(const std::function<double(double)>& f, double a, double b,
                     const SupOptions& opts = {});

/// Supremum of w over (a, b); exact endpoint limits plus interior scan.
double essential_sup(const WeightExpr& w, double a, double b, const SupOptions& opts = {});
double log_essential_sup(const WeightExpr& w, double a, double b, const SupOptions& opts = {});

/// Cumulative integrals of a positive density on a log-spaced cell table.
/// Queries inside [lo, hi] cost one partial-cell Gauss rule.
class Cumulative {
 public:
  struct Options {
    double lo = 1e-9;
    double hi = 1e9;
    int per_decade = 16;
    QuadOptions quad;
  };

  /// Density w^r for a grammar weight: divergence at 0 / inf is exact.
  Cumulative(const WeightExpr& w, double r, const Options& opts);
  Cumulative(const WeightExpr& w, double r) : Cumulative(w, r, Options{}) {}
  /// Generic log-density with known kinks.
  Cumulative(LogFn log_density, std::vector<double> kinks, const Options& opts);

  double log_density(double t) const { return logf_(t); }
  /// log int_0^t
  double log_from_zero(double t) const;
  /// log int_t^inf
  double log_to_inf(double t) const;
  /// log int_a^b
  double log_between(double a, double b) const;

  bool head_finite() const { return head_ < kInf; }
  bool tail_finite() const { return tail_ < kInf; }
  bool resolved() const { return resolved_; }

 private:
  void build(const std::vector<double>& kinks);
  std::size_t cell_of(double t) const;
  double log_cell_partial(double a, double b) const;

  double log_outside(double a, double b) const;

  LogFn logf_;
  std::optional<WeightExpr> expr_;  // grammar density, closed forms outside the table
  Options opts_;
  std::vector<double> edges_;
  std::vector<double> cell_;        // log int over each cell
  std::vector<double> log_prefix_;  // log sum of cells [0, k)
  std::vector<double> log_suffix_;  // log sum of cells [k, N)
  double head_ = -kInf;             // log int_0^lo
  double tail_ = -kInf;             // log int_hi^inf
  bool resolved_ = true;
};

/// Range maxima of a log-valued function on a dense log grid, with exact
/// endpoint evaluation.
class RangeMax {
 public:
  RangeMax(LogFn f, double lo = 1e-9, double hi = 1e9, int per_decade = 64);

  /// sup over (a, b); a = 0 and b = inf use the grid extremes as limits.
  double query(double a, double b) const;
  double eval(double t) const { return f_(t); }

 private:
  double grid_max(std::size_t i, std::size_t j) const;  // inclusive

  LogFn f_;
  std::vector<double> grid_;
  std::vector<std::vector<double>> table_;  // sparse table
};

}  // namespace morrey
