// SPDX-License-Identifier: Apache-2.0
//
// Brute-force lower bounds for the embedding norm: Rayleigh quotients of
// product test functions f(x) = g(|x|) psi(x/|x|) with g piecewise constant.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "functionals.hpp"
#include "reduction.hpp"
#include "weights.hpp"

namespace morrey {

/// One side of the embedding, LM_{p,q}(v, w) on R^dim.
struct MorreySpace {
  RnWeight v;
  WeightExpr w;
  double p = 1.0, q = 1.0;
};

struct SpacePair {
  int dim = 1;
  MorreySpace s1, s2;

  static SpacePair make(int dim, const ExponentQuad& e, const RnWeight& v1, const RnWeight& v2,
                        const WeightExpr& w1, const WeightExpr& w2);
};

/// Precomputed outer-integral nodes of
///   N(g) = int_0^inf ( int_0^t g^p D )^{q/p} O dt
/// for a fixed knot vector; g enters only through its cell values.
class RadialNorm {
 public:
  /// fine = 16-point panels at half the variation threshold, for error estimates
  RadialNorm(const WeightExpr& inner, const WeightExpr& outer, double p, double q,
             const std::vector<double>& knots, bool fine = false);

  /// log N from log cell values (-inf for zero cells).
  double log_n(const std::vector<double>& log_values) const;
  double p() const { return p_; }
  double q() const { return q_; }
  std::size_t nodes() const;

 private:
  struct Cell {
    double log_mass = -kInf;        // log int_cell D
    double log_outer = -kInf;       // log int_cell O
    std::vector<double> log_w;      // node weight times O
    std::vector<double> log_m;      // log int_{cell start}^{node} D
  };
  double p_, q_;
  std::vector<Cell> cells_;
  double log_tail_ = -kInf;  // log int_{t_K}^inf O
};

/// (int_0^inf (int_0^t g^p vdens)^{q/p} outer dt)^{1/q}, the one-dimensional form.
double lm_norm(const RadialTestFunction& g, const WeightExpr& vdens, const WeightExpr& outer, double p,
               double q);
/// ||f||_{LM_{p,q}(v,w)} for f(x) = g(|x|) on R^n, ball B(0,t).
double lm_norm(const RadialTestFunction& g, const RnWeight& v, const WeightExpr& w, double p, double q);

/// Log of the angular factor sup_psi ||psi a2||_{p2,S} / ||psi a1||_{p1,S}
/// realized by an explicit psi on the sphere grid.
double log_angular_factor(const SpacePair& sp);

/// ||f||_{LM_2} / ||f||_{LM_1} for f = g(|x|) psi; NaN when undefined.
double rayleigh(const RadialTestFunction& g, const SpacePair& sp, bool fine = false);
/// Same from log cell values, as log; avoids underflow of normalized values.
double log_rayleigh(const std::vector<double>& knots, const std::vector<double>& log_values, const SpacePair& sp,
                    bool fine = false);

struct SearchConfig {
  int knots = 64;
  double lo = 1e-4, hi = 1e4;
  int restarts = 4;
  int sweeps = 12;
  std::uint64_t seed = 1;
  double slack = 10.0;
  /// support widening for the divergence witness
  double witness_bound = 1e3;
  int witness_steps = 8;
};

struct WideningStep {
  double lo = 0.0, hi = 0.0;
  double log_lower_bound = -kInf;
};

struct SearchResult {
  bool defined = false;
  double lower_bound = 0.0;      // may be +inf when the log overflows
  double log_lower_bound = -kInf;
  double error_estimate = 0.0;   // |L - L on refined node tables|
  RadialTestFunction g;          // realizes the bound, values normalized to max 1
  std::vector<double> log_values;
  int evaluations = 0;
  std::string rng = "mt19937_64";
  std::uint64_t seed = 0;
  std::vector<WideningStep> widening;  // filled by the divergence witness
  std::string failure;
};

/// Maximizes the quotient over cell values; hints are candidate argsup
/// locations for concentrated seeds.
SearchResult best_constant_search(const SpacePair& sp, const SearchConfig& cfg,
                                  const std::vector<double>& hints = {});

/// Repeats the search on widening supports until the bound exceeds
/// cfg.witness_bound or the steps run out.
SearchResult divergence_witness(const SpacePair& sp, const SearchConfig& cfg,
                                const std::vector<double>& hints = {});

enum class VerdictKind { pass, pass_divergent, fail, undefined };

struct Verdict {
  VerdictKind kind = VerdictKind::undefined;
  double ratio = 0.0;  // I / L
  std::string detail;

  bool passed() const { return kind == VerdictKind::pass || kind == VerdictKind::pass_divergent; }
  std::string name() const;
};

Verdict verify_equivalence(double functional, const SearchResult& l, double slack, double witness_bound = 1e3);

}  // namespace morrey
