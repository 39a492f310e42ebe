// SPDX-License-Identifier: Apache-2.0

#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include "gauss.hpp"

namespace morrey {

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a == kInf || b == kInf) return kInf;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_sub(double a, double b) {
  if (b == -kInf) return a;
  if (b >= a) return -kInf;
  return a + std::log(-std::expm1(b - a));
}

// ---------------------------------------------------------------------------
// tanh-sinh

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kXMax = 6.0;          // 2 * (pi/2) sinh(6) ~ 633: nodes reach ~1e-275
constexpr double kNegligible = 46.0;   // e^-46 ~ 1e-20 relative

double log_cosh(double s) {
  s = std::abs(s);
  return s + std::log1p(std::exp(-2.0 * s)) - std::numbers::ln2;
}

struct Node {
  double t;
  double log_w;  // log of weight without the step h
};

// Unit-interval quantities of every abscissa x = j / 2^kFinest, |x| <= kXMax.
constexpr int kFinest = 8;
constexpr int kSteps = 1 << kFinest;

struct UnitNodes {
  int half;                      // index of x = 0
  std::vector<double> d;         // distance to the nearer end of (0, 1)
  std::vector<double> log_d;
  std::vector<double> log1m_d;   // log(1 - d)
  std::vector<double> log_core;  // log of (1/2) (pi/2) cosh x / cosh^2 s

  UnitNodes() {
    half = static_cast<int>(kXMax) * kSteps;
    const std::size_t n = 2 * static_cast<std::size_t>(half) + 1;
    d.resize(n);
    log_d.resize(n);
    log1m_d.resize(n);
    log_core.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = (static_cast<double>(i) - half) / kSteps;
      const double sv = kHalfPi * std::sinh(x);
      const double e2 = 2.0 * std::abs(sv);
      d[i] = e2 > 700 ? 0.0 : 1.0 / (std::exp(e2) + 1.0);
      log_d[i] = e2 > 700 ? -e2 : -std::log1p(std::exp(e2));
      log1m_d[i] = std::log1p(-d[i]);
      log_core[i] = std::log(kHalfPi * std::cosh(x)) - 2.0 * log_cosh(sv) - std::numbers::ln2;
    }
  }
};

const UnitNodes& unit_nodes() {
  static const UnitNodes table;
  return table;
}

// Node for abscissa index j (x = j / kSteps) of the rule on (a, b), b possibly infinite.
Node node(long j, double a, double b, double log_len) {
  const UnitNodes& u = unit_nodes();
  const auto i = static_cast<std::size_t>(j + u.half);
  const double d = u.d[i];
  if (std::isinf(b)) {
    // u in (0,1); t = a + u/(1-u); dt = du/(1-u)^2
    if (j >= 0) return {d == 0.0 ? kInf : a + (1.0 - d) / d, u.log_core[i] - 2.0 * u.log_d[i]};
    return {a + d / (1.0 - d), u.log_core[i] - 2.0 * u.log1m_d[i]};
  }
  const double len = b - a;
  return {j >= 0 ? b - len * d : a + len * d, u.log_core[i] + log_len};
}

LogQuad tanh_sinh(const LogFn& logf, double a, double b, const QuadOptions& opts) {
  LogSum total;
  const double log_len = std::isinf(b) ? 0.0 : std::log(b - a);
  const long jmax = static_cast<long>(kXMax) * kSteps;
  long j_lo = -jmax, j_hi = jmax;
  auto term = [&](long j) -> double {
    const Node n = node(j, a, b, log_len);
    if (!(n.t > a) || !(n.t < b) || std::isinf(n.t)) return -kInf;
    const double lf = logf(n.t);
    if (std::isnan(lf)) return -kInf;
    return lf + n.log_w;
  };

  // level 0 with h = 1, also finds where the terms are negligible
  {
    std::vector<std::pair<long, double>> terms;
    for (long j = -jmax; j <= jmax; j += kSteps) {
      const double l = term(j);
      terms.emplace_back(j, l);
      total.add(l);
    }
    const double peak = total.value();
    if (peak == kInf) return {kInf, 0.0, true};
    if (peak > -kInf) {
      long lo = jmax, hi = -jmax;
      for (auto [j, l] : terms) {
        if (l > peak - kNegligible) {
          lo = std::min(lo, j);
          hi = std::max(hi, j);
        }
      }
      j_lo = std::max(-jmax, lo - kSteps);
      j_hi = std::min(jmax, hi + kSteps);
    }
  }
  double prev = total.value();
  const int max_level = std::min(opts.max_level, kFinest);
  for (int level = 1; level <= max_level; ++level) {
    const long stride = kSteps >> level;  // new nodes are odd multiples of stride
    const double h = 1.0 / static_cast<double>(1 << level);
    long first = (j_lo / stride) * stride;
    if (first < j_lo) first += stride;
    if (((first / stride) & 1) == 0) first += stride;
    for (long j = first; j <= j_hi; j += 2 * stride) total.add(term(j));
    const double cur = total.value() + std::log(h);
    if (cur == kInf) return {kInf, 0.0, true};
    if (cur == -kInf && prev == -kInf) {
      if (level >= 3) return {-kInf, 0.0, true};
      continue;
    }
    const double rel = std::abs(std::expm1(prev - cur));
    prev = cur;
    if (level >= 3 && rel <= opts.rel_tol) return {cur, rel, true};
    if (level == max_level) return {cur, rel, false};
  }
  return {prev, 1.0, false};
}

LogQuad adaptive(const LogFn& logf, double a, double b, const QuadOptions& opts, int depth) {
  LogQuad r = tanh_sinh(logf, a, b, opts);
  if (r.converged || depth <= 0) return r;
  double mid;
  if (std::isinf(b)) {
    mid = a + std::max(1.0, a);
  } else if (a > 0 && b / a > 16.0) {
    mid = std::sqrt(a * b);
  } else {
    mid = 0.5 * (a + b);
  }
  const LogQuad left = adaptive(logf, a, mid, opts, depth - 1);
  const LogQuad right = adaptive(logf, mid, b, opts, depth - 1);
  LogQuad out;
  out.log_value = log_add(left.log_value, right.log_value);
  out.converged = left.converged && right.converged;
  // relative errors weighted by each part's share
  double err = 0.0;
  if (out.log_value > -kInf && out.log_value < kInf) {
    if (left.log_value > -kInf) err += left.rel_error * std::exp(left.log_value - out.log_value);
    if (right.log_value > -kInf) err += right.rel_error * std::exp(right.log_value - out.log_value);
  }
  out.rel_error = err;
  return out;
}

}  // namespace

namespace {

constexpr double kDominance = 50.0;

LogQuad combine_parts(const LogQuad& l, const LogQuad& r) {
  LogQuad out;
  out.log_value = log_add(l.log_value, r.log_value);
  out.converged = l.converged && r.converged;
  if (out.log_value > -kInf && out.log_value < kInf) {
    if (l.log_value > -kInf) out.rel_error += l.rel_error * std::exp(l.log_value - out.log_value);
    if (r.log_value > -kInf) out.rel_error += r.rel_error * std::exp(r.log_value - out.log_value);
  }
  return out;
}

// int over (a, b) of a density concentrated at one end: integrate the offset
// from that end on (0, inf) so the mapping resolves the decay scale.
LogQuad from_end(const LogFn& logf, double a, double b, bool left, const QuadOptions& opts) {
  const double len = b - a;
  LogFn g = [&](double s) {
    if (!(s < len)) return -kInf;
    return logf(left ? a + s : b - s);
  };
  return adaptive(g, 0.0, kInf, opts, opts.max_depth);
}

LogQuad finite_log(const LogFn& logf, double a, double b, const QuadOptions& opts, int depth) {
  const double len = b - a;
  constexpr int kProbes = 9;
  std::array<double, kProbes> ts{}, fs{};
  const std::array<double, kProbes> rel = {1e-6, 1e-3, 0.1, 0.3, 0.5, 0.7, 0.9, 1 - 1e-3, 1 - 1e-6};
  double hi = -kInf, lo = kInf;
  std::size_t arg = 0;
  for (int i = 0; i < kProbes; ++i) {
    ts[i] = a + len * rel[i];
    fs[i] = logf(ts[i]);
    if (std::isnan(fs[i])) continue;
    if (fs[i] > hi) hi = fs[i], arg = static_cast<std::size_t>(i);
    lo = std::min(lo, fs[i]);
  }
  if (depth <= 0 || !(hi - lo > kDominance) || !std::isfinite(hi)) return adaptive(logf, a, b, opts, opts.max_depth);
  if (arg <= 1 && fs[kProbes - 1] < hi - kDominance) return from_end(logf, a, b, true, opts);
  if (arg >= kProbes - 2 && fs[0] < hi - kDominance) return from_end(logf, a, b, false, opts);
  // interior peak: split there, each half is end-dominated
  const double c = ts[arg];
  return combine_parts(finite_log(logf, a, c, opts, depth - 1), finite_log(logf, c, b, opts, depth - 1));
}

}  // namespace

namespace {

// Gauss-Legendre of order n on [a, b] in log space.
double log_gauss(const LogFn& logf, double a, double b, const GaussRule& g) {
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  LogSum s;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) s.add(std::log(h * g.weights[k]) + logf(c + h * g.nodes[k]));
  return s.value();
}

}  // namespace

LogQuad integrate_log(const LogFn& logf, double a, double b, const QuadOptions& opts) {
  if (!(a < b)) return {-kInf, 0.0, true};
  if (std::isinf(b)) return adaptive(logf, a, b, opts, opts.max_depth);
  if (a > 0 && b - a < 1e-5 * a) {
    // tanh-sinh nodes collapse onto the ends here; the integrand is smooth at this scale
    static const GaussRule g10 = gauss_legendre(10);
    const double lo = log_gauss(logf, a, b, g10), hi = log_gauss(logf, a, b, gauss_legendre_20());
    if (hi == -kInf && lo == -kInf) return {-kInf, 0.0, true};
    if (std::isfinite(hi) && std::isfinite(lo)) {
      const double rel = std::abs(std::expm1(lo - hi));
      if (rel <= std::max(opts.rel_tol, 1e-14)) return {hi, rel, true};
    }
  }
  return finite_log(logf, a, b, opts, 4);
}

// ---------------------------------------------------------------------------
// Grammar weights

namespace {

// log of int_lo^hi c s^alpha ds given log(lo) (may be -inf) and log(hi) (may be +inf).
// Returns +inf on divergence.
double log_power_integral(double log_c, double alpha, double log_lo, double log_hi) {
  const double e = alpha + 1.0;
  if (std::abs(e) < 1e-14) {
    if (log_lo == -kInf || log_hi == kInf) return kInf;
    return log_c + std::log(log_hi - log_lo);
  }
  if (e > 0) {
    if (log_hi == kInf) return kInf;
    if (log_lo == -kInf) return log_c + e * log_hi - std::log(e);
    // c (hi^e - lo^e)/e = c hi^e (1 - (lo/hi)^e)/e
    return log_c + e * log_hi + std::log(-std::expm1(e * (log_lo - log_hi))) - std::log(e);
  }
  if (log_lo == -kInf) return kInf;
  if (log_hi == kInf) return log_c + e * log_lo - std::log(-e);
  // c (lo^e - hi^e)/(-e) = c lo^e (1 - (hi/lo)^e)/(-e)
  return log_c + e * log_lo + std::log(-std::expm1(e * (log_hi - log_lo))) - std::log(-e);
}

double log_exp_integral(double log_c, double delta, double lo, double hi) {
  if (delta > 0) {
    const double span = std::isinf(hi) ? 1.0 : -std::expm1(-delta * (hi - lo));
    return log_c - delta * lo + std::log(span) - std::log(delta);
  }
  if (std::isinf(hi)) return kInf;
  const double g = -delta;
  return log_c + g * hi + std::log(-std::expm1(-g * (hi - lo))) - std::log(g);
}

struct Segment {
  double lo, hi;
  const Product* body;
};

std::vector<Segment> segments(const WeightExpr& w, double a, double b) {
  std::vector<Segment> out;
  for (const auto& p : w.pieces()) {
    const double lo = std::max(a, p.lo), hi = std::min(b, p.hi);
    if (lo < hi) out.push_back({lo, hi, &p.body});
  }
  return out;
}

}  // namespace

LogQuad log_integrate_weighted(const WeightExpr& w, double r, double a, double b,
                               const QuadOptions& opts) {
  if (a < 0 || !(a < b)) throw DomainError("integration bounds must satisfy 0 <= a < b");
  LogQuad out;
  double err = 0.0;
  std::vector<LogQuad> parts;
  for (const auto& seg : segments(w, a, b)) {
    const Product body = seg.body->pow(r);
    const ProductShape s = body.shape();
    if (seg.lo == 0.0 && !s.integrable_at_zero()) return {kInf, 0.0, true};
    if (std::isinf(seg.hi) && !s.integrable_at_infinity()) return {kInf, 0.0, true};
    LogQuad part;
    if (s.is_pure_power()) {
      part.log_value = log_power_integral(s.log_c, s.power, std::log(seg.lo), std::log(seg.hi));
    } else if (s.is_pure_one_plus()) {
      part.log_value = log_power_integral(s.log_c, s.one_plus, std::log1p(seg.lo), std::log1p(seg.hi));
    } else if (s.is_pure_exp()) {
      part.log_value = log_exp_integral(s.log_c, s.exp, seg.lo, seg.hi);
    } else {
      part = integrate_log([&body](double t) { return body.log_eval(t); }, seg.lo, seg.hi, opts);
    }
    parts.push_back(part);
    out.log_value = log_add(out.log_value, part.log_value);
    out.converged = out.converged && part.converged;
  }
  if (out.log_value > -kInf && out.log_value < kInf) {
    for (const auto& p : parts)
      if (p.log_value > -kInf) err += p.rel_error * std::exp(p.log_value - out.log_value);
  }
  out.rel_error = err;
  return out;
}

QuadResult integrate_weighted(const WeightExpr& w, double r, double a, double b,
                              const QuadOptions& opts) {
  QuadResult res;
  const LogQuad l = log_integrate_weighted(w, r, a, b, opts);
  if (l.log_value == kInf) {
    res.value = kInf;
    res.certificate = "integrand is bounded below by a non-integrable power/exponential "
                      "profile at " + std::string(std::isinf(b) ? "infinity" : "zero");
    // distinguish the endpoint that fails
    for (const auto& seg : segments(w, a, b)) {
      const ProductShape s = seg.body->pow(r).shape();
      if (seg.lo == 0.0 && !s.integrable_at_zero()) {
        res.certificate = "non-integrable singularity at 0 (t^" + format_number(s.power) + " minorant)";
        break;
      }
      if (std::isinf(seg.hi) && !s.integrable_at_infinity()) {
        res.certificate = "non-integrable tail at infinity (t^" +
                          format_number(s.power + s.one_plus) + " minorant)";
        break;
      }
    }
    return res;
  }
  res.value = std::exp(l.log_value);
  res.abs_error = res.value * l.rel_error;
  res.converged = l.converged;
  res.exact = l.rel_error == 0.0 && l.converged;
  return res;
}

QuadResult tail_norm(const WeightExpr& w, double q, double t, const QuadOptions& opts) {
  if (!(q > 0)) throw DomainError("tail_norm needs q > 0");
  if (t < 0) throw DomainError("tail_norm needs t >= 0");
  QuadResult r = integrate_weighted(w, q, t, kInf, opts);
  if (r.divergent()) return r;
  const double v = std::pow(r.value, 1.0 / q);
  r.abs_error = r.value > 0 ? v * (r.abs_error / r.value) / q : 0.0;
  r.value = v;
  return r;
}

// ---------------------------------------------------------------------------
// Suprema

namespace {

struct Compactified {
  int kind;
  double a, b;
  double z_lo, z_hi;

  double t(double z) const {
    switch (kind) {
      case 0: return std::exp(z);
      case 1: return a * (1.0 + std::exp(z));
      case 2: return b / (1.0 + std::exp(-z));
      default: return a + (b - a) / (1.0 + std::exp(-z));
    }
  }
};

Compactified compactify(double a, double b, const SupOptions& o) {
  const double ln6 = std::log(1e6);
  if (a == 0.0 && std::isinf(b)) return {0, a, b, std::log(o.lo), std::log(o.hi)};
  if (std::isinf(b)) return {1, a, b, std::log(1e-8), std::log(std::max(o.hi / a, 1e6))};
  if (a == 0.0) return {2, a, b, std::log(std::min(o.lo / b, 1e-6)), ln6};
  return {3, a, b, -ln6, ln6};
}

}  // namespace

SupResult sup_search(const std::function<double(double)>& f, double a, double b,
                     const SupOptions& opts) {
  if (a < 0 || !(a < b)) throw DomainError("sup_search needs 0 <= a < b");
  const Compactified c = compactify(a, b, opts);
  const double dz = std::log(10.0) / opts.per_decade;
  const auto n = static_cast<std::size_t>(std::ceil((c.z_hi - c.z_lo) / dz)) + 1;
  std::vector<double> zs(n), vals(n);
  SupResult res;
  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    zs[i] = std::min(c.z_lo + static_cast<double>(i) * dz, c.z_hi);
    const double t = c.t(zs[i]);
    vals[i] = (t > a && t < b) ? f(t) : std::nan("");
    ++res.evaluations;
    if (std::isnan(vals[i])) continue;
    res.defined = true;
    if (best == n || vals[i] > vals[best]) best = i;
  }
  if (best == n) return res;
  res.argsup = c.t(zs[best]);
  res.sup = vals[best];
  res.bracket = std::abs(c.t(std::min(zs[best] + dz, c.z_hi)) - c.t(std::max(zs[best] - dz, c.z_lo)));
  if (std::isinf(res.sup)) return res;

  // local maxima, best first
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(vals[i]) || vals[i] == -kInf) continue;
    const bool left_ok = i == 0 || std::isnan(vals[i - 1]) || vals[i] >= vals[i - 1];
    const bool right_ok = i + 1 == n || std::isnan(vals[i + 1]) || vals[i] >= vals[i + 1];
    if (left_ok && right_ok) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t x, std::size_t y) { return vals[x] > vals[y]; });
  if (peaks.size() > static_cast<std::size_t>(opts.candidates)) peaks.resize(opts.candidates);

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t i : peaks) {
    double lo = i > 0 ? zs[i - 1] : zs[i];
    double hi = i + 1 < n ? zs[i + 1] : zs[i];
    if (hi - lo <= 0) continue;
    auto g = [&](double z) {
      ++res.evaluations;
      const double t = c.t(z);
      if (!(t > a && t < b)) return -kInf;
      const double v = f(t);
      return std::isnan(v) ? -kInf : v;
    };
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    while (hi - lo > opts.bracket_tol) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - invphi * (hi - lo);
        f1 = g(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + invphi * (hi - lo);
        f2 = g(x2);
      }
    }
    const double zb = f1 >= f2 ? x1 : x2;
    const double fb = std::max(f1, f2);
    if (fb > res.sup) {
      res.sup = fb;
      res.argsup = c.t(zb);
      res.bracket = std::abs(c.t(hi) - c.t(lo));
    }
  }
  return res;
}

double log_essential_sup(const WeightExpr& w, double a, double b, const SupOptions& opts) {
  if (a < 0 || !(a < b)) throw DomainError("essential_sup needs 0 <= a < b");
  double best = -kInf;
  for (const auto& seg : segments(w, a, b)) {
    const ProductShape s = seg.body->shape();
    const double at_lo = seg.lo == 0.0 ? s.log_limit_at_zero() : seg.body->log_eval(seg.lo);
    const double at_hi = std::isinf(seg.hi) ? s.log_limit_at_infinity() : seg.body->log_eval(seg.hi);
    best = std::max({best, at_lo, at_hi});
    if (best == kInf) return kInf;
    const Product* body = seg.body;
    const SupResult r = sup_search([body](double t) { return body->log_eval(t); }, seg.lo, seg.hi, opts);
    if (r.defined) best = std::max(best, r.sup);
  }
  return best;
}

double essential_sup(const WeightExpr& w, double a, double b, const SupOptions& opts) {
  return std::exp(log_essential_sup(w, a, b, opts));
}

// ---------------------------------------------------------------------------
// Cumulative

Cumulative::Cumulative(const WeightExpr& w, double r, const Options& opts) : opts_(opts) {
  const WeightExpr wr = w.pow(r);
  logf_ = [wr](double t) { return wr.log_eval(t); };
  expr_ = wr;
  head_ = log_integrate_weighted(wr, 1.0, 0.0, opts_.lo, opts_.quad).log_value;
  tail_ = log_integrate_weighted(wr, 1.0, opts_.hi, kInf, opts_.quad).log_value;
  build(wr.breakpoints());
}

Cumulative::Cumulative(LogFn log_density, std::vector<double> kinks, const Options& opts)
    : logf_(std::move(log_density)), opts_(opts) {
  const LogQuad h = integrate_log(logf_, 0.0, opts_.lo, opts_.quad);
  const LogQuad t = integrate_log(logf_, opts_.hi, kInf, opts_.quad);
  head_ = h.log_value;
  tail_ = t.log_value;
  resolved_ = h.converged && t.converged;
  build(kinks);
}

void Cumulative::build(const std::vector<double>& kinks) {
  const double decades = std::log10(opts_.hi / opts_.lo);
  const auto cells = static_cast<std::size_t>(std::ceil(decades * opts_.per_decade));
  edges_.clear();
  for (std::size_t i = 0; i <= cells; ++i)
    edges_.push_back(opts_.lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(cells)));
  edges_.back() = opts_.hi;
  for (double k : kinks)
    if (k > opts_.lo && k < opts_.hi) edges_.push_back(k);
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  const std::size_t n = edges_.size() - 1;
  std::vector<double>& cell = cell_;
  cell.assign(n, -kInf);
  QuadOptions q = opts_.quad;
  q.rel_tol = std::min(q.rel_tol, 1e-12);
  for (std::size_t i = 0; i < n; ++i) {
    const LogQuad c = integrate_log(logf_, edges_[i], edges_[i + 1], q);
    resolved_ = resolved_ && c.converged;
    cell[i] = c.log_value;
  }
  log_prefix_.assign(n + 1, -kInf);
  log_suffix_.assign(n + 1, -kInf);
  for (std::size_t i = 0; i < n; ++i) log_prefix_[i + 1] = log_add(log_prefix_[i], cell[i]);
  for (std::size_t i = n; i-- > 0;) log_suffix_[i] = log_add(log_suffix_[i + 1], cell[i]);
}

std::size_t Cumulative::cell_of(double t) const {
  auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
  const auto k = static_cast<std::size_t>(it - edges_.begin());
  return std::min(k == 0 ? 0 : k - 1, edges_.size() - 2);
}

double Cumulative::log_cell_partial(double a, double b) const {
  if (!(a < b)) return -kInf;
  const double fa = logf_(a), fb = logf_(b), fm = logf_(0.5 * (a + b));
  const double spread = std::max({fa, fb, fm}) - std::min({fa, fb, fm});
  // 20-point Gauss is good to ~1e-13 for an exponential varying by 12 over the panel
  if (std::isfinite(spread) && spread < 48.0) {
    const GaussRule& g = gauss_legendre_20();
    const int panels = std::max(1, static_cast<int>(std::ceil(spread / 12.0)));
    const double width = (b - a) / panels;
    LogSum s;
    for (int k = 0; k < panels; ++k) {
      const double lo = a + width * k;
      const double half = 0.5 * width, mid = lo + half;
      for (std::size_t m = 0; m < g.nodes.size(); ++m)
        s.add(logf_(mid + half * g.nodes[m]) + std::log(g.weights[m] * half));
    }
    return s.value();
  }
  return integrate_log(logf_, a, b, opts_.quad).log_value;
}

double Cumulative::log_between(double a, double b) const {
  if (!(a < b)) return -kInf;
  double acc = -kInf;
  const double lo = opts_.lo, hi = opts_.hi;
  if (a < lo) {
    if (a == 0.0 && b >= lo) {
      acc = log_add(acc, head_);
    } else {
      acc = log_add(acc, log_outside(a, std::min(b, lo)));
    }
  }
  if (b > hi) {
    if (std::isinf(b) && a <= hi) {
      acc = log_add(acc, tail_);
    } else {
      acc = log_add(acc, log_outside(std::max(a, hi), b));
    }
  }
  const double ta = std::max(a, lo), tb = std::min(b, hi);
  if (ta < tb) {
    // ka: edges[ka] <= ta < edges[ka+1]; kb: edges[kb] < tb <= edges[kb+1]
    const std::size_t ka = cell_of(ta);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), tb);
    const std::size_t kb = static_cast<std::size_t>(it - edges_.begin()) - 1;
    auto part = [&](std::size_t k, double x, double y) {
      return (x == edges_[k] && y == edges_[k + 1]) ? cell_[k] : log_cell_partial(x, y);
    };
    if (ka == kb) {
      acc = log_add(acc, part(ka, ta, tb));
    } else {
      acc = log_add(acc, part(ka, ta, edges_[ka + 1]));
      acc = log_add(acc, part(kb, edges_[kb], tb));
      if (kb > ka + 1) {
        // cells ka+1 .. kb-1; pick the better conditioned difference
        const double pa = log_prefix_[kb], pb = log_prefix_[ka + 1];
        const double sa = log_suffix_[ka + 1], sb = log_suffix_[kb];
        const double mid = (pb - pa) < (sb - sa) ? log_sub(pa, pb) : log_sub(sa, sb);
        acc = log_add(acc, mid);
      }
    }
  }
  return acc;
}

double Cumulative::log_outside(double a, double b) const {
  if (expr_) return log_integrate_weighted(*expr_, 1.0, a, b, opts_.quad).log_value;
  return integrate_log(logf_, a, b, opts_.quad).log_value;
}

double Cumulative::log_from_zero(double t) const { return log_between(0.0, t); }

double Cumulative::log_to_inf(double t) const { return log_between(t, kInf); }

// ---------------------------------------------------------------------------
// RangeMax

RangeMax::RangeMax(LogFn f, double lo, double hi, int per_decade) : f_(std::move(f)) {
  const double decades = std::log10(hi / lo);
  const auto n = static_cast<std::size_t>(std::ceil(decades * per_decade)) + 1;
  grid_.resize(n);
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid_[i] = lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n - 1));
    const double v = f_(grid_[i]);
    vals[i] = std::isnan(v) ? -kInf : v;
  }
  table_.push_back(std::move(vals));
  for (std::size_t w = 1; 2 * w <= n; w *= 2) {
    const auto& prev = table_.back();
    std::vector<double> next(n - 2 * w + 1);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::max(prev[i], prev[i + w]);
    table_.push_back(std::move(next));
  }
}

double RangeMax::grid_max(std::size_t i, std::size_t j) const {
  const std::size_t len = j - i + 1;
  std::size_t k = 0;
  while ((std::size_t{2} << k) <= len) ++k;
  return std::max(table_[k][i], table_[k][j + 1 - (std::size_t{1} << k)]);
}

double RangeMax::query(double a, double b) const {
  double best = -kInf;
  auto consider = [&](double v) {
    if (!std::isnan(v)) best = std::max(best, v);
  };
  if (a > 0) consider(f_(a));
  if (std::isfinite(b)) consider(f_(b));
  auto i = static_cast<std::size_t>(std::upper_bound(grid_.begin(), grid_.end(), a) - grid_.begin());
  auto j_end = static_cast<std::size_t>(std::lower_bound(grid_.begin(), grid_.end(), b) - grid_.begin());
  if (i < j_end) consider(grid_max(i, j_end - 1));
  return best;
}

}  // namespace morrey
