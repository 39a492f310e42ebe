// SPDX-License-Identifier: Apache-2.0

#include "weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "gauss.hpp"

namespace morrey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();


}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Factor / Product

double Factor::log_eval(double t) const {
  switch (kind) {
    case Kind::constant: return std::log(param);
    case Kind::power: return param == 0.0 ? 0.0 : param * std::log(t);
    case Kind::one_plus: return param == 0.0 ? 0.0 : param * std::log1p(t);
    case Kind::log: return param == 0.0 ? 0.0 : param * std::log(std::log(std::numbers::e + t));
    case Kind::exp: return -param * t;
    case Kind::inv_exp: return -param / t;
  }
  return 0.0;
}

double Product::log_eval(double t) const {
  double acc = 0.0;
  for (const auto& f : factors_) acc += f.log_eval(t);
  return acc;
}

ProductShape Product::shape() const {
  ProductShape s;
  for (const auto& f : factors_) {
    switch (f.kind) {
      case Factor::Kind::constant: s.log_c += std::log(f.param); break;
      case Factor::Kind::power: s.power += f.param; break;
      case Factor::Kind::one_plus: s.one_plus += f.param; break;
      case Factor::Kind::log: s.log += f.param; break;
      case Factor::Kind::exp: s.exp += f.param; break;
      case Factor::Kind::inv_exp: s.inv_exp += f.param; break;
    }
  }
  return s;
}

double ProductShape::log_limit_at_zero() const {
  if (inv_exp > 0) return -kInf;
  if (inv_exp < 0) return kInf;
  if (power > 0) return -kInf;
  if (power < 0) return kInf;
  return log_c;
}

double ProductShape::log_limit_at_infinity() const {
  if (exp > 0) return -kInf;
  if (exp < 0) return kInf;
  const double s = power + one_plus;
  if (std::abs(s) > 1e-12) return s > 0 ? kInf : -kInf;
  if (log > 0) return kInf;
  if (log < 0) return -kInf;
  return log_c;
}

bool ProductShape::integrable_at_zero() const {
  if (inv_exp > 0) return true;
  if (inv_exp < 0) return false;
  return power > -1.0 + 1e-12;
}

bool ProductShape::integrable_at_infinity() const {
  if (exp > 0) return true;
  if (exp < 0) return false;
  const double s = power + one_plus;
  if (s < -1.0 - 1e-12) return true;
  if (s > -1.0 + 1e-12) return false;
  return log < -1.0 - 1e-12;
}

Product Product::pow(double r) const {
  std::vector<Factor> out = factors_;
  for (auto& f : out) f.param = f.kind == Factor::Kind::constant ? std::pow(f.param, r) : f.param * r;
  return Product(std::move(out));
}

Product Product::times(const Product& other) const {
  std::vector<Factor> out = factors_;
  out.insert(out.end(), other.factors_.begin(), other.factors_.end());
  return Product(std::move(out));
}

Product Product::inverted() const {
  std::vector<Factor> out;
  for (const auto& f : factors_) {
    switch (f.kind) {
      case Factor::Kind::constant: out.push_back(f); break;
      case Factor::Kind::power: out.push_back({Factor::Kind::power, -f.param}); break;
      case Factor::Kind::one_plus:
        // (1 + 1/t)^b = (1+t)^b t^-b
        out.push_back(f);
        out.push_back({Factor::Kind::power, -f.param});
        break;
      case Factor::Kind::log:
        throw UnsupportedError("log(e+t) factor is not closed under t -> 1/t");
      case Factor::Kind::exp: out.push_back({Factor::Kind::inv_exp, f.param}); break;
      case Factor::Kind::inv_exp: out.push_back({Factor::Kind::exp, f.param}); break;
    }
  }
  return Product(std::move(out)).simplified();
}

Product Product::simplified() const {
  std::vector<Factor> out;
  for (const auto& f : factors_) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Factor& g) { return g.kind == f.kind; });
    if (it == out.end()) {
      out.push_back(f);
    } else if (f.kind == Factor::Kind::constant) {
      it->param *= f.param;
    } else {
      it->param += f.param;
    }
  }
  std::erase_if(out, [](const Factor& f) {
    if (f.kind == Factor::Kind::constant) return f.param == 1.0;
    return std::abs(f.param) < 1e-14;
  });
  return Product(std::move(out));
}

std::string Product::str() const {
  if (factors_.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += " * ";
    const auto& f = factors_[i];
    const std::string p = format_number(f.param);
    switch (f.kind) {
      case Factor::Kind::constant: s += p; break;
      case Factor::Kind::power: s += "t^" + p; break;
      case Factor::Kind::one_plus: s += "(1+t)^" + p; break;
      case Factor::Kind::log: s += "log(e+t)^" + p; break;
      case Factor::Kind::exp: s += "exp(-" + p + "*t)"; break;
      case Factor::Kind::inv_exp: s += "exp(-" + p + "/t)"; break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// WeightExpr

WeightExpr::WeightExpr() : pieces_{Piece{0.0, kInf, Product{}}} {}

WeightExpr::WeightExpr(Product body) : pieces_{Piece{0.0, kInf, std::move(body)}} {}

WeightExpr::WeightExpr(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw DomainError("piecewise weight needs at least one piece");
  if (pieces_.front().lo != 0.0) throw DomainError("first piece must start at 0");
  if (pieces_.back().hi != kInf) throw DomainError("last piece must extend to inf");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].lo < pieces_[i].hi)) throw DomainError("empty piece interval");
    if (i && pieces_[i].lo != pieces_[i - 1].hi) throw DomainError("pieces leave a gap or overlap");
  }
}

WeightExpr WeightExpr::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constant weight must be positive and finite");
  return WeightExpr(Product({{Factor::Kind::constant, c}}));
}

WeightExpr WeightExpr::power(double alpha, double c) {
  std::vector<Factor> f;
  if (c != 1.0) f.push_back({Factor::Kind::constant, c});
  f.push_back({Factor::Kind::power, alpha});
  return WeightExpr(Product(std::move(f)));
}

std::vector<double> WeightExpr::breakpoints() const {
  std::vector<double> b;
  for (std::size_t i = 1; i < pieces_.size(); ++i) b.push_back(pieces_[i].lo);
  return b;
}

const Piece& WeightExpr::piece_at(double t) const {
  // Pieces are (lo, hi]; the last one is (lo, inf).
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                             [](const Piece& p, double x) { return p.hi < x; });
  if (it == pieces_.end()) return pieces_.back();
  return *it;
}

double WeightExpr::log_eval(double t) const {
  if (!(t > 0.0)) throw DomainError("weight evaluated at t <= 0");
  return piece_at(t).body.log_eval(t);
}

double WeightExpr::eval(double t) const { return std::exp(log_eval(t)); }

WeightExpr WeightExpr::pow(double r) const {
  std::vector<Piece> out = pieces_;
  for (auto& p : out) p.body = p.body.pow(r);
  return WeightExpr(std::move(out));
}

WeightExpr WeightExpr::times(const WeightExpr& other) const {
  std::vector<double> cuts = breakpoints();
  const auto ob = other.breakpoints();
  cuts.insert(cuts.end(), ob.begin(), ob.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(kInf);
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const double mid = std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
    out.push_back({lo, hi, piece_at(mid).body.times(other.piece_at(mid).body)});
  }
  return WeightExpr(std::move(out));
}

WeightExpr WeightExpr::scaled(double c) const {
  return times(WeightExpr::constant(c));
}

WeightExpr WeightExpr::inverted() const {
  std::vector<Piece> out;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    const double lo = std::isinf(it->hi) ? 0.0 : 1.0 / it->hi;
    const double hi = it->lo == 0.0 ? kInf : 1.0 / it->lo;
    out.push_back({lo, hi, it->body.inverted()});
  }
  return WeightExpr(std::move(out));
}

bool WeightExpr::is_continuous(double rel_tol) const {
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const double b = pieces_[i].lo;
    const double l = pieces_[i - 1].body.log_eval(b);
    const double r = pieces_[i].body.log_eval(b);
    if (std::abs(std::expm1(l - r)) > rel_tol) return false;
  }
  return true;
}

std::string WeightExpr::str() const {
  if (pieces_.size() == 1) return pieces_.front().body.str();
  std::string s = "{";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i) s += "; ";
    s += pieces_[i].body.str() + " on (" + format_number(pieces_[i].lo) + "," +
         format_number(pieces_[i].hi) + ")";
  }
  return s + "}";
}

double weight_eval(const WeightExpr& w, double t) { return w.eval(t); }

WeightExpr weight_pow_compose(const WeightExpr& w, double r) { return w.pow(r); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  WeightExpr parse() {
    skip_ws();
    WeightExpr out;
    if (peek() == '{') {
      out = parse_piecewise();
    } else {
      out = WeightExpr(parse_product());
    }
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool accept(std::string_view lit) {
    skip_ws();
    if (s_.substr(pos_, lit.size()) == lit) {
      pos_ += lit.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view lit) {
    if (!accept(lit)) fail("expected '" + std::string(lit) + "'");
  }

  double number(bool allow_inf) {
    skip_ws();
    if (allow_inf && accept("inf")) return kInf;
    std::size_t start = pos_;
    if (peek() == '+') ++start;
    double value = 0.0;
    const char* first = s_.data() + start;
    const char* last = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("expected number");
    if (!std::isfinite(value)) fail("expected finite number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return value;
  }

  Factor factor() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept("t^")) return {Factor::Kind::power, number(false)};
    if (accept("(1+t)^")) return {Factor::Kind::one_plus, number(false)};
    if (accept("log(e+t)^")) return {Factor::Kind::log, number(false)};
    if (accept("exp(-")) {
      const double d = number(false);
      if (accept("*t)")) return {Factor::Kind::exp, d};
      if (accept("/t)")) return {Factor::Kind::inv_exp, d};
      fail("expected '*t)' or '/t)'");
    }
    const double c = number(false);
    if (!(c > 0.0)) {
      pos_ = at;
      fail("constant must be positive");
    }
    return {Factor::Kind::constant, c};
  }

  Product parse_product() {
    std::vector<Factor> f{factor()};
    while (accept("*")) f.push_back(factor());
    return Product(std::move(f));
  }

  WeightExpr parse_piecewise() {
    expect("{");
    std::vector<Piece> pieces;
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      Product body = parse_product();
      expect("on");
      expect("(");
      const double lo = number(true);
      expect(",");
      const double hi = number(true);
      expect(")");
      if (!(lo < hi)) {
        pos_ = at;
        fail("piece interval must have positive length");
      }
      const double prev = pieces.empty() ? 0.0 : pieces.back().hi;
      if (lo != prev) {
        pos_ = at;
        fail(pieces.empty() ? "first piece must start at 0" : "pieces leave a gap or overlap");
      }
      pieces.push_back({lo, hi, std::move(body)});
      if (accept(";")) continue;
      expect("}");
      break;
    }
    if (pieces.back().hi != kInf) fail("last piece must extend to inf");
    return WeightExpr(std::move(pieces));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

WeightExpr parse_weight(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Sphere grids and angular weights

double sphere_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: break;
  }
  // 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, dim / 2.0) / std::tgamma(dim / 2.0);
}

SphereGrid sphere_grid(int dim, std::size_t count) {
  SphereGrid g;
  if (dim == 1) {
    if (count != 2) throw DomainError("S^0 grid has exactly 2 nodes");
    g.nodes = {{1.0}, {-1.0}};
    g.weights = {1.0, 1.0};
  } else if (dim == 2) {
    if (count < 2) throw DomainError("circle grid needs at least 2 nodes");
    const double h = 2.0 * std::numbers::pi / static_cast<double>(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double phi = (static_cast<double>(k) + 0.5) * h;
      g.nodes.push_back({std::cos(phi), std::sin(phi)});
      g.weights.push_back(h);
    }
  } else if (dim == 3) {
    // m Gauss-Legendre bands in cos(theta) times 2m longitudes.
    const auto m = static_cast<std::size_t>(std::lround(std::sqrt(count / 2.0)));
    if (m == 0 || 2 * m * m != count) throw DomainError("S^2 grid size must be 2 m^2");
    const GaussRule rule = gauss_legendre(m);
    const double h = std::numbers::pi / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double z = rule.nodes[i];
      const double r = std::sqrt(1.0 - z * z);
      for (std::size_t k = 0; k < 2 * m; ++k) {
        const double phi = (static_cast<double>(k) + 0.5) * h;
        g.nodes.push_back({r * std::cos(phi), r * std::sin(phi), z});
        g.weights.push_back(rule.weights[i] * h);
      }
    }
  } else {
    throw DomainError("tabulated angular weights support n in {1,2,3}");
  }
  return g;
}

std::size_t SphereGrid::locate(std::span<const double> d) const {
  const std::size_t count = nodes.size();
  const std::size_t dim = nodes.front().size();
  if (dim == 1) return d[0] >= 0.0 ? 0 : 1;
  if (dim == 2) {
    double phi = std::atan2(d[1], d[0]);
    if (phi < 0) phi += 2.0 * std::numbers::pi;
    auto k = static_cast<std::size_t>(phi / (2.0 * std::numbers::pi) * static_cast<double>(count));
    return std::min(k, count - 1);
  }
  // dim 3: band by cumulative weight in z, then longitude.
  const auto m = static_cast<std::size_t>(std::lround(std::sqrt(count / 2.0)));
  const double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  const double z = d[2] / norm;
  double edge = -1.0;
  std::size_t band = m - 1;
  for (std::size_t i = 0; i < m; ++i) {
    edge += weights[i * 2 * m] / (std::numbers::pi / static_cast<double>(m));
    if (z <= edge) {
      band = i;
      break;
    }
  }
  double phi = std::atan2(d[1], d[0]);
  if (phi < 0) phi += 2.0 * std::numbers::pi;
  auto k = static_cast<std::size_t>(phi / std::numbers::pi * static_cast<double>(m));
  return band * 2 * m + std::min(k, 2 * m - 1);
}

namespace {

const SphereGrid& cached_grid(int dim, std::size_t count) {
  static std::mutex mu;
  static std::map<std::pair<int, std::size_t>, SphereGrid> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, count);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, sphere_grid(dim, count)).first;
  return it->second;
}

}  // namespace

const SphereGrid& cached_sphere_grid(int dim, std::size_t count) { return cached_grid(dim, count); }

AngularWeight AngularWeight::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("angular weight must be positive and finite");
  AngularWeight a;
  a.c_ = c;
  return a;
}

AngularWeight AngularWeight::tabulated(int dim, std::vector<double> values) {
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("angular weight values must be positive and finite");
  (void)cached_grid(dim, values.size());  // validates the size
  AngularWeight a;
  a.dim_ = dim;
  a.values_ = std::move(values);
  return a;
}

double AngularWeight::integral_pow(int dim, double r) const {
  if (is_constant()) return std::pow(c_, r) * sphere_measure(dim);
  if (dim != dim_) throw DomainError("angular grid dimension mismatch");
  const auto& g = cached_grid(dim_, values_.size());
  double s = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) s += g.weights[k] * std::pow(values_[k], r);
  return s;
}

double AngularWeight::max() const {
  return is_constant() ? c_ : *std::max_element(values_.begin(), values_.end());
}

double AngularWeight::min() const {
  return is_constant() ? c_ : *std::min_element(values_.begin(), values_.end());
}

double AngularWeight::value_at(std::span<const double> direction) const {
  if (is_constant()) return c_;
  return values_[cached_grid(dim_, values_.size()).locate(direction)];
}

AngularWeight AngularWeight::pow(double r) const {
  if (is_constant()) return constant(std::pow(c_, r));
  std::vector<double> v = values_;
  for (auto& x : v) x = std::pow(x, r);
  return tabulated(dim_, std::move(v));
}

AngularWeight AngularWeight::times(const AngularWeight& other) const {
  if (is_constant() && other.is_constant()) return constant(c_ * other.c_);
  if (is_constant()) return other.times(*this);
  std::vector<double> v = values_;
  if (other.is_constant()) {
    for (auto& x : v) x *= other.c_;
  } else {
    if (other.dim_ != dim_ || other.values_.size() != v.size())
      throw DomainError("angular grids differ");
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= other.values_[k];
  }
  return tabulated(dim_, std::move(v));
}

std::string AngularWeight::str() const {
  if (is_constant()) return format_number(c_);
  std::string s = "table:";
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (k) s += ",";
    s += format_number(values_[k]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// RnWeight / ExponentQuad

double RnWeight::eval(std::span<const double> x) const {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double r = std::sqrt(r2);
  if (!(r > 0.0)) throw DomainError("weight evaluated at the origin");
  std::vector<double> dir(x.begin(), x.end());
  for (auto& c : dir) c /= r;
  return radial.eval(r) * angular.value_at(dir);
}

RnWeight RnWeight::pow(double r) const { return {dim, radial.pow(r), angular.pow(r)}; }

RnWeight RnWeight::times(const RnWeight& other) const {
  if (dim != other.dim) throw DomainError("weights live in different dimensions");
  return {dim, radial.times(other.radial), angular.times(other.angular)};
}

ExponentQuad ExponentQuad::make(double p1, double p2, double q1, double q2) {
  for (double x : {p1, p2, q1, q2})
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("exponents must lie in (0, inf)");
  return {p1, p2, q1, q2};
}

}  // namespace morrey
