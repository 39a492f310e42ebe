// SPDX-License-Identifier: Apache-2.0
//
// Case classification, admissibility and the characterization functionals
// I_1 .. I_14, all evaluated on the reduced one-dimensional problem.

#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "reduction.hpp"

namespace morrey {

enum class CaseTag { A_i, A_ii, B_i, B_ii, B_iii, B_iv, C, D_i, D_ii, Unsupported };

struct TheoremCase {
  CaseTag tag = CaseTag::Unsupported;
  std::string reason;  // for Unsupported

  bool supported() const { return tag != CaseTag::Unsupported; }
  /// "A_i", ..., "Unsupported(p2>p1)"
  std::string name() const;
  /// Functional indices whose sum estimates the embedding norm.
  std::vector<int> components() const;
};

TheoremCase classify(const ExponentQuad& e);
std::vector<CaseTag> supported_tags();
std::string tag_name(CaseTag t);

struct AdmissibilityCheck {
  std::string condition;
  bool passed = true;
  std::string detail;
};

struct Admissibility {
  bool passed = true;
  std::vector<AdmissibilityCheck> checks;
  /// first failed condition, empty if none
  std::string failure() const;
};

Admissibility check_admissibility(const TheoremCase& c, const ReducedProblem& r);

/// Exponent variant of a functional. "printed" reproduces the formulas
/// literally; "corrected" restores the scaling laws where the printed
/// exponents break them. Functionals without a discrepancy ignore the flag.
enum class Variant { corrected, printed };

bool has_variants(int k);

struct FunctionalSettings {
  QuadOptions quad{};
  SupOptions sup{};
  std::array<Variant, 15> variant{};  // index 1..14

  FunctionalSettings() { variant.fill(Variant::corrected); }
};

struct Component {
  int k = 0;
  double value = 0.0;           // +inf when divergent
  double error = 0.0;
  double argsup = 0.0;          // outer argument where the sup/peak sits
  Variant variant = Variant::corrected;
  bool resolved = true;         // every nested quadrature converged
  std::string divergence;       // reason when value is infinite

  std::string name() const { return "I" + std::to_string(k); }
};

struct FunctionalValue {
  double value = 0.0;
  double error_estimate = 0.0;
  bool finite = true;
  std::vector<Component> components;
};

/// Evaluates functionals of one reduced problem; shares the cumulative
/// tables between components.
class FunctionalEvaluator {
 public:
  FunctionalEvaluator(const ReducedProblem& r, FunctionalSettings s = {});
  ~FunctionalEvaluator();
  FunctionalEvaluator(const FunctionalEvaluator&) = delete;
  FunctionalEvaluator& operator=(const FunctionalEvaluator&) = delete;

  Component eval(int k) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FunctionalValue eval_functional(int k, const ReducedProblem& r, const FunctionalSettings& s = {});
FunctionalValue embedding_norm_estimate(const TheoremCase& c, const ReducedProblem& r,
                                        const FunctionalSettings& s = {});

}  // namespace morrey
