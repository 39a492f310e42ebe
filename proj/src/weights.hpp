// SPDX-License-Identifier: Apache-2.0
//
// Weight expressions on (0, inf) and separable weights on R^n.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace morrey {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised when a Morrey-type space collapses to {0} (non-integrable tail).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// One multiplicative factor of a weight product.
struct Factor {
  enum class Kind {
    constant,  // c
    power,     // t^a
    one_plus,  // (1+t)^b
    log,       // log(e+t)^g
    exp,       // exp(-d*t)
    inv_exp,   // exp(-d/t)
  };
  Kind kind;
  double param;

  double log_eval(double t) const;
  bool operator==(const Factor&) const = default;
};

/// Exponent summary of a product, used for endpoint asymptotics.
struct ProductShape {
  double log_c = 0.0;
  double power = 0.0;     // t^power
  double one_plus = 0.0;  // (1+t)^one_plus
  double log = 0.0;       // log(e+t)^log
  double exp = 0.0;       // exp(-exp*t)
  double inv_exp = 0.0;   // exp(-inv_exp/t)

  bool is_pure_power() const { return one_plus == 0 && log == 0 && exp == 0 && inv_exp == 0; }
  bool is_pure_one_plus() const { return power == 0 && log == 0 && exp == 0 && inv_exp == 0; }
  bool is_pure_exp() const { return power == 0 && one_plus == 0 && log == 0 && inv_exp == 0; }
  bool is_constant() const { return is_pure_power() && power == 0; }

  /// log of lim_{t->0+}; +inf / -inf allowed.
  double log_limit_at_zero() const;
  /// log of lim_{t->inf}; +inf / -inf allowed.
  double log_limit_at_infinity() const;
  /// Whether int_0^eps is finite.
  bool integrable_at_zero() const;
  /// Whether int_M^inf is finite.
  bool integrable_at_infinity() const;
};

class Product {
 public:
  Product() = default;
  explicit Product(std::vector<Factor> factors) : factors_(std::move(factors)) {}

  const std::vector<Factor>& factors() const { return factors_; }
  double log_eval(double t) const;
  ProductShape shape() const;

  Product pow(double r) const;
  Product times(const Product& other) const;
  /// t -> this(1/t); throws UnsupportedError for log factors.
  Product inverted() const;
  /// Merges like factors (first-appearance order) and drops neutral ones.
  Product simplified() const;

  std::string str() const;
  bool operator==(const Product&) const = default;

 private:
  std::vector<Factor> factors_;
};

struct Piece {
  double lo;
  double hi;  // +inf for the last piece
  Product body;
  bool operator==(const Piece&) const = default;
};

/// A positive weight on (0, inf): a product of closed-form factors, or a
/// piecewise glue of such products over 0 = b0 < b1 < ... < bm = inf.
/// Immutable value type.
class WeightExpr {
 public:
  WeightExpr();  // the constant 1
  explicit WeightExpr(Product body);
  explicit WeightExpr(std::vector<Piece> pieces);

  static WeightExpr constant(double c);
  static WeightExpr power(double alpha, double c = 1.0);

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_piecewise() const { return pieces_.size() > 1; }
  /// Interior breakpoints b1 < ... < b_{m-1}.
  std::vector<double> breakpoints() const;
  const Piece& piece_at(double t) const;

  double eval(double t) const;
  double log_eval(double t) const;

  WeightExpr pow(double r) const;
  WeightExpr times(const WeightExpr& other) const;
  WeightExpr scaled(double c) const;
  WeightExpr inverted() const;

  /// Continuity across breakpoints to relative tolerance.
  bool is_continuous(double rel_tol = 1e-12) const;

  std::string str() const;
  bool operator==(const WeightExpr&) const = default;

 private:
  std::vector<Piece> pieces_;
};

WeightExpr parse_weight(std::string_view text);
double weight_eval(const WeightExpr& w, double t);
WeightExpr weight_pow_compose(const WeightExpr& w, double r);

/// Shortest round-trip decimal form; "inf" for +infinity.
std::string format_number(double x);

/// Angular factor a(x/|x|) of a separable weight: a constant, or values
/// tabulated on a sphere quadrature grid.
class AngularWeight {
 public:
  AngularWeight() = default;  // constant 1
  static AngularWeight constant(double c);
  /// Values at the nodes of sphere_grid(dim, values.size()).
  static AngularWeight tabulated(int dim, std::vector<double> values);

  bool is_constant() const { return values_.empty(); }
  double constant_value() const { return c_; }
  const std::vector<double>& values() const { return values_; }
  int grid_dim() const { return dim_; }

  /// (int_{S^{n-1}} a^r dsigma, esssup a).
  double integral_pow(int dim, double r) const;
  double max() const;
  double min() const;
  double value_at(std::span<const double> direction) const;

  AngularWeight pow(double r) const;
  AngularWeight times(const AngularWeight& other) const;

  std::string str() const;

 private:
  double c_ = 1.0;
  int dim_ = 0;
  std::vector<double> values_;
};

/// Quadrature grid on S^{n-1} for n in {1, 2, 3}.
struct SphereGrid {
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
  /// Index of the node whose cell contains the direction.
  std::size_t locate(std::span<const double> direction) const;
};
SphereGrid sphere_grid(int dim, std::size_t count);
/// Shared immutable instance of sphere_grid(dim, count).
const SphereGrid& cached_sphere_grid(int dim, std::size_t count);
double sphere_measure(int dim);

/// v(x) = rho(|x|) * a(x/|x|).
struct RnWeight {
  int dim = 1;
  WeightExpr radial;
  AngularWeight angular;

  double eval(std::span<const double> x) const;
  RnWeight pow(double r) const;
  RnWeight times(const RnWeight& other) const;
};

/// Lebesgue / Morrey exponents (p1, p2, q1, q2) and the reduced parameters.
struct ExponentQuad {
  double p1, p2, q1, q2;

  static ExponentQuad make(double p1, double p2, double q1, double q2);
  double p() const { return p2 / p1; }
  double q() const { return q2 / p1; }
  double theta() const { return q1 / p1; }
};

}  // namespace morrey
