// SPDX-License-Identifier: Apache-2.0

#include "oracle.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "gauss.hpp"

namespace morrey {

SpacePair SpacePair::make(int dim, const ExponentQuad& e, const RnWeight& v1, const RnWeight& v2,
                          const WeightExpr& w1, const WeightExpr& w2) {
  SpacePair sp;
  sp.dim = dim;
  sp.s1 = {v1, w1, e.p1, e.q1};
  sp.s2 = {v2, w2, e.p2, e.q2};
  sp.s1.v.dim = sp.s2.v.dim = dim;
  return sp;
}

// ---------------------------------------------------------------------------
// Node tables

namespace {

constexpr double kPrune = 100.0;     // panels this far below the cell peak are dropped
constexpr double kVariation = 1.0;   // max log change of a density across one panel
constexpr int kMaxDepth = 40;
constexpr std::size_t kMaxPanels = 4096;  // per cell

const GaussRule& rule(bool fine) {
  static const GaussRule r8 = gauss_legendre(8), r16 = gauss_legendre(16);
  return fine ? r16 : r8;
}

}  // namespace

RadialNorm::RadialNorm(const WeightExpr& inner, const WeightExpr& outer, double p, double q,
                       const std::vector<double>& knots, bool fine)
    : p_(p), q_(q) {
  const double variation = fine ? 0.5 * kVariation : kVariation;
  if (knots.size() < 2) throw DomainError("need at least two knots");
  auto ld = [&inner](double t) { return inner.log_eval(t); };
  auto lo = [&outer](double t) { return outer.log_eval(t); };
  std::vector<double> kinks = inner.breakpoints();
  for (double b : outer.breakpoints()) kinks.push_back(b);
  const GaussRule& gl = rule(fine);

  cells_.resize(knots.size() - 1);
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    Cell& c = cells_[j];
    const double a = knots[j], b = knots[j + 1], len = b - a;
    c.log_mass = log_integrate_weighted(inner, 1.0, a, b).log_value;
    c.log_outer = log_integrate_weighted(outer, 1.0, a, b).log_value;

    // graded toward the left end, where int_a^t D vanishes
    std::vector<double> edges;
    for (double s : {0.0, 1e-12, 1e-9, 1e-6, 1e-4, 1e-2, 0.1, 0.3, 0.6, 1.0}) edges.push_back(a + len * s);
    edges.back() = b;
    for (double k : kinks)
      if (k > a && k < b) edges.push_back(k);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    double peak = -kInf;
    for (int i = 0; i <= 64; ++i) peak = std::max(peak, lo(a + len * i / 64.0));
    for (double e : edges)
      if (e > a && e < b) peak = std::max(peak, lo(e));

    // partial mass from a; where it has saturated the density may vary freely
    auto lm = [&](double t) { return t > a ? log_integrate_weighted(inner, 1.0, a, t).log_value : -kInf; };
    std::vector<std::pair<double, double>> panels;
    auto split = [&](auto&& self, double x, double y, int depth) -> void {
      const double ox = lo(x), oy = lo(y);
      const double om = lo(0.5 * (x + y));
      if (std::max({ox, oy, om}) < peak - kPrune && depth > 0) return;
      bool rough = std::abs(ox - oy) > variation || std::abs(om - 0.5 * (ox + oy)) > 0.25 * variation;
      if (!rough && std::abs(ld(x) - ld(y)) > variation) {
        const double mx = lm(x);
        rough = mx == -kInf || lm(y) - mx > variation;
      }
      if (rough && depth < kMaxDepth && y - x > 1e-12 * b && panels.size() < kMaxPanels) {
        const double m = 0.5 * (x + y);
        self(self, x, m, depth + 1);
        self(self, m, y, depth + 1);
        return;
      }
      panels.emplace_back(x, y);
    };
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) split(split, edges[i], edges[i + 1], 0);

    // partial masses accumulate panel by panel
    double acc = -kInf, prev = a;
    for (auto [x, y] : panels) {
      const double h = 0.5 * (y - x);
      if (x > prev) acc = log_add(acc, log_integrate_weighted(inner, 1.0, prev, x).log_value);
      prev = x;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double t = x + h * (gl.nodes[k] + 1.0);
        const double lw = std::log(h * gl.weights[k]) + lo(t);
        if (lw == -kInf) continue;
        const double m = t > x ? log_add(acc, log_integrate_weighted(inner, 1.0, x, t).log_value) : acc;
        c.log_w.push_back(lw);
        c.log_m.push_back(m);
      }
    }
  }
  log_tail_ = log_integrate_weighted(outer, 1.0, knots.back(), kInf).log_value;
}

std::size_t RadialNorm::nodes() const {
  std::size_t n = 0;
  for (const auto& c : cells_) n += c.log_w.size();
  return n;
}

double RadialNorm::log_n(const std::vector<double>& lv) const {
  if (lv.size() != cells_.size()) throw DomainError("cell value count does not match the knot table");
  const double r = q_ / p_;
  double ls = -kInf;
  LogSum total;
  for (std::size_t j = 0; j < cells_.size(); ++j) {
    const Cell& c = cells_[j];
    if (lv[j] == -kInf) {
      if (ls > -kInf) total.add(r * ls + c.log_outer);
      continue;
    }
    const double lc = p_ * lv[j];
    for (std::size_t k = 0; k < c.log_w.size(); ++k) total.add(r * log_add(ls, lc + c.log_m[k]) + c.log_w[k]);
    ls = log_add(ls, lc + c.log_mass);
  }
  if (ls > -kInf) total.add(r * ls + log_tail_);
  return total.value();
}

// ---------------------------------------------------------------------------
// Norms of a single test function

namespace {

std::vector<double> log_values_of(const RadialTestFunction& g) {
  std::vector<double> lv(g.values.size());
  for (std::size_t i = 0; i < lv.size(); ++i) lv[i] = g.values[i] > 0 ? std::log(g.values[i]) : -kInf;
  return lv;
}

// rho^p t^{n-1}
WeightExpr ball_density(const MorreySpace& s, int dim) {
  return s.v.radial.pow(s.p).times(WeightExpr::power(static_cast<double>(dim - 1)));
}

}  // namespace

double lm_norm(const RadialTestFunction& g, const WeightExpr& vdens, const WeightExpr& outer, double p,
               double q) {
  if (g.knots.size() < 2 || g.is_zero()) return 0.0;
  const RadialNorm n(vdens, outer, p, q, g.knots);
  return std::exp(n.log_n(log_values_of(g)) / q);
}

double lm_norm(const RadialTestFunction& g, const RnWeight& v, const WeightExpr& w, double p, double q) {
  if (g.knots.size() < 2 || g.is_zero()) return 0.0;
  MorreySpace s{v, w, p, q};
  const double sphere = v.angular.integral_pow(v.dim, p);
  const RadialNorm n(ball_density(s, v.dim).scaled(sphere), w.pow(q), p, q, g.knots);
  return std::exp(n.log_n(log_values_of(g)) / q);
}

// ---------------------------------------------------------------------------
// Angular factor

double log_angular_factor(const SpacePair& sp) {
  const AngularWeight& a1 = sp.s1.v.angular;
  const AngularWeight& a2 = sp.s2.v.angular;
  const double p1 = sp.s1.p, p2 = sp.s2.p;
  std::size_t count = std::max(a1.values().size(), a2.values().size());
  if (count == 0) {
    // psi = 1
    const double ls = std::log(sphere_measure(sp.dim));
    return std::log(a2.constant_value()) + ls / p2 - std::log(a1.constant_value()) - ls / p1;
  }
  const SphereGrid& grid = cached_sphere_grid(sp.dim, count);
  std::vector<double> lr(count);
  for (std::size_t k = 0; k < count; ++k)
    lr[k] = std::log(a2.value_at(grid.nodes[k])) - std::log(a1.value_at(grid.nodes[k]));
  // phi = psi a1; extremal phi is r^{p2/(p1-p2)}, or the argmax node when p1 = p2
  std::vector<double> lphi(count, -kInf);
  if (exponents_equal(p1, p2)) {
    const std::size_t k = static_cast<std::size_t>(std::max_element(lr.begin(), lr.end()) - lr.begin());
    lphi[k] = 0.0;
  } else {
    for (std::size_t k = 0; k < count; ++k) lphi[k] = p2 / (p1 - p2) * lr[k];
  }
  LogSum num, den;
  for (std::size_t k = 0; k < count; ++k) {
    if (lphi[k] == -kInf) continue;
    const double lw = std::log(grid.weights[k]);
    num.add(p2 * (lphi[k] + lr[k]) + lw);
    den.add(p1 * lphi[k] + lw);
  }
  return num.value() / p2 - den.value() / p1;
}

// ---------------------------------------------------------------------------
// Quotient on a fixed knot vector

namespace {

class Quotient {
 public:
  Quotient(const SpacePair& sp, const std::vector<double>& knots, bool fine = false)
      : n1_(ball_density(sp.s1, sp.dim), sp.s1.w.pow(sp.s1.q), sp.s1.p, sp.s1.q, knots, fine),
        n2_(ball_density(sp.s2, sp.dim), sp.s2.w.pow(sp.s2.q), sp.s2.p, sp.s2.q, knots, fine),
        la_(log_angular_factor(sp)) {}

  // log of the quotient, NaN when the denominator is 0 or infinite
  double log_r(const std::vector<double>& lv) {
    ++evaluations;
    const double d = n1_.log_n(lv);
    if (!std::isfinite(d)) return std::nan("");
    const double n = n2_.log_n(lv);
    if (std::isnan(n)) return n;
    return la_ + n / n2_.q() - d / n1_.q();
  }

  int evaluations = 0;

 private:
  RadialNorm n1_, n2_;
  double la_;
};

std::vector<double> log_knots(double lo, double hi, int k) {
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i <= k; ++i) t[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / k);
  t.front() = lo;
  t.back() = hi;
  return t;
}

bool better(double x, double y) { return !std::isnan(x) && (std::isnan(y) || x > y); }

struct Candidate {
  std::vector<double> lv;
  double value = std::nan("");
};

// Cyclic multiplicative coordinate ascent; never decreases the incumbent.
void ascend(Quotient& q, Candidate& c, int sweeps) {
  const std::size_t n = c.lv.size();
  const double steps[] = {std::log(4.0), std::log(2.0), std::log(1.25)};
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double start = c.value;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> trial_values;
      if (c.lv[j] == -kInf) {
        // switch on next to an active neighbour
        double nb = -kInf;
        if (j > 0) nb = std::max(nb, c.lv[j - 1]);
        if (j + 1 < n) nb = std::max(nb, c.lv[j + 1]);
        if (nb == -kInf) continue;
        trial_values = {nb, nb - std::log(4.0), nb - std::log(16.0)};
      } else {
        for (double s : steps) {
          trial_values.push_back(c.lv[j] + s);
          trial_values.push_back(c.lv[j] - s);
        }
        trial_values.push_back(-kInf);
      }
      const double keep = c.lv[j];
      double best_lv = keep;
      for (double t : trial_values) {
        c.lv[j] = t;
        const double r = q.log_r(c.lv);
        if (better(r, c.value) && r > c.value + 1e-13) {
          c.value = r;
          best_lv = t;
        }
      }
      c.lv[j] = best_lv;
      if (best_lv != keep) {
        // keep walking in the accepted direction
        const double d = best_lv - keep;
        if (std::isfinite(d)) {
          for (int k = 0; k < 40; ++k) {
            c.lv[j] = best_lv + d;
            const double r = q.log_r(c.lv);
            if (!(better(r, c.value) && r > c.value + 1e-13)) break;
            c.value = r;
            best_lv += d;
          }
          c.lv[j] = best_lv;
        }
      }
    }
    if (!(c.value > start + 1e-9)) break;
  }
}

std::vector<double> bump(std::size_t n, std::size_t i, std::size_t j) {
  std::vector<double> lv(n, -kInf);
  for (std::size_t k = i; k <= j && k < n; ++k) lv[k] = 0.0;
  return lv;
}

SearchResult search_on(const SpacePair& sp, const SearchConfig& cfg, const std::vector<double>& hints, int k,
                       double lo, double hi, int restarts, int sweeps) {
  SearchResult res;
  res.seed = cfg.seed;
  const std::vector<double> knots = log_knots(lo, hi, k);
  Quotient q(sp, knots);
  const std::size_t n = knots.size() - 1;

  std::vector<Candidate> seeds;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto add_bump = [&](std::size_t i, std::size_t j) {
    if (i > j || j >= n || !seen.insert({i, j}).second) return;
    Candidate c{bump(n, i, j)};
    c.value = q.log_r(c.lv);
    seeds.push_back(std::move(c));
  };
  // bump pairs on a coarse knot subset
  const std::size_t stride = std::max<std::size_t>(1, n / 16);
  for (std::size_t i = 0; i < n; i += stride)
    for (std::size_t j = i; j < n; j += stride) add_bump(i, std::min(n - 1, j + stride - 1));
  add_bump(0, n - 1);
  // concentrated around candidate argsup locations
  for (double x : hints) {
    if (!(x > 0) || !std::isfinite(x)) continue;
    const double xc = std::clamp(x, knots.front(), knots.back());
    const std::size_t c = std::min<std::size_t>(
        n - 1, static_cast<std::size_t>(std::upper_bound(knots.begin(), knots.end(), xc) - knots.begin()) - 1);
    for (std::size_t w : {0, 1, 2, 4, 8, 16}) {
      add_bump(c >= w ? c - w : 0, std::min(n - 1, c + w));
      add_bump(c, std::min(n - 1, c + w));
      add_bump(c >= w ? c - w : 0, c);
    }
  }

  std::vector<Candidate> defined;
  for (auto& s : seeds)
    if (!std::isnan(s.value)) defined.push_back(s);
  if (defined.empty()) {
    res.failure = "every seed gives an undefined quotient";
    res.evaluations = q.evaluations;
    return res;
  }
  std::stable_sort(defined.begin(), defined.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

  Candidate best;
  // a few best seeds, then restarts from perturbed incumbents
  const std::size_t starts = std::min<std::size_t>(3, defined.size());
  for (std::size_t i = 0; i < starts; ++i) {
    Candidate c = defined[i];
    ascend(q, c, sweeps);
    if (better(c.value, best.value)) best = c;
  }
  for (int r = 0; r < restarts; ++r) {
    std::seed_seq ss{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(r)};
    std::mt19937_64 rng(ss);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    Candidate c = best;
    if (r % 2 == 0) {
      for (auto& x : c.lv)
        if (x > -kInf) x += noise(rng);
    } else {
      std::size_t i = pick(rng), j = pick(rng);
      if (i > j) std::swap(i, j);
      for (std::size_t t = i; t <= j; ++t)
        if (c.lv[t] == -kInf) c.lv[t] = *std::max_element(c.lv.begin(), c.lv.end()) + noise(rng);
    }
    c.value = q.log_r(c.lv);
    if (std::isnan(c.value)) continue;
    ascend(q, c, sweeps);
    if (better(c.value, best.value)) best = c;  // ties keep the earlier restart
  }

  res.defined = true;
  res.log_lower_bound = best.value;
  res.lower_bound = std::exp(best.value);
  res.log_values = best.lv;
  const double top = *std::max_element(best.lv.begin(), best.lv.end());
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = best.lv[i] == -kInf ? 0.0 : std::exp(best.lv[i] - top);
  res.g = RadialTestFunction(knots, vals);
  res.evaluations = q.evaluations;
  const double fine = log_rayleigh(knots, best.lv, sp, true);
  res.error_estimate = std::isfinite(fine) ? std::abs(std::expm1(fine - best.value)) * res.lower_bound : kInf;
  return res;
}

}  // namespace

double log_rayleigh(const std::vector<double>& knots, const std::vector<double>& log_values, const SpacePair& sp,
                    bool fine) {
  if (knots.size() < 2) return std::nan("");
  Quotient q(sp, knots, fine);
  return q.log_r(log_values);
}

double rayleigh(const RadialTestFunction& g, const SpacePair& sp, bool fine) {
  if (g.knots.size() < 2 || g.is_zero()) return std::nan("");
  return std::exp(log_rayleigh(g.knots, log_values_of(g), sp, fine));
}

SearchResult best_constant_search(const SpacePair& sp, const SearchConfig& cfg, const std::vector<double>& hints) {
  if (cfg.knots < 1) throw DomainError("knot count must be >= 1");
  if (cfg.restarts < 0) throw DomainError("restarts must be >= 0");
  if (!(cfg.lo > 0.0 && cfg.lo < cfg.hi)) throw DomainError("support range must satisfy 0 < lo < hi");
  return search_on(sp, cfg, hints, cfg.knots, cfg.lo, cfg.hi, cfg.restarts, cfg.sweeps);
}

SearchResult divergence_witness(const SpacePair& sp, const SearchConfig& cfg, const std::vector<double>& hints) {
  SearchResult best;
  const double log_bound = std::log(cfg.witness_bound);
  const double per_decade = cfg.knots / std::log10(cfg.hi / cfg.lo);
  std::vector<WideningStep> steps;
  for (int s = 0; s < cfg.witness_steps; ++s) {
    const double widen = std::pow(10.0, 4.0 * s);
    const double lo = cfg.lo / widen, hi = cfg.hi * widen;
    const int k = static_cast<int>(std::ceil(std::min(per_decade, 8.0) * std::log10(hi / lo)));
    SearchResult r = search_on(sp, cfg, hints, std::max(k, 1), lo, hi, 0, 2);
    steps.push_back({lo, hi, r.log_lower_bound});
    if (r.defined && (!best.defined || r.log_lower_bound > best.log_lower_bound)) best = r;
    if (r.defined && r.log_lower_bound > log_bound) break;
  }
  best.widening = std::move(steps);
  if (!best.defined && best.failure.empty()) best.failure = "every seed gives an undefined quotient";
  return best;
}

// ---------------------------------------------------------------------------
// Verdicts

std::string Verdict::name() const {
  switch (kind) {
    case VerdictKind::pass: return "PASS";
    case VerdictKind::pass_divergent: return "PASS-divergent";
    case VerdictKind::fail: return "FAIL";
    case VerdictKind::undefined: return "UNDEFINED";
  }
  return "UNDEFINED";
}

Verdict verify_equivalence(double functional, const SearchResult& l, double slack, double witness_bound) {
  Verdict v;
  if (!(slack > 1.0)) throw DomainError("slack must exceed 1");
  if (!l.defined) {
    v.detail = l.failure.empty() ? "oracle undefined" : l.failure;
    return v;
  }
  const double ll = l.log_lower_bound;
  if (std::isinf(functional)) {
    double top = ll;
    for (const auto& s : l.widening) top = std::max(top, s.log_lower_bound);
    v.ratio = kInf;
    if (top > std::log(witness_bound)) {
      v.kind = VerdictKind::pass_divergent;
      v.detail = "lower bound exceeds " + format_number(witness_bound) + " under support widening";
    } else {
      v.kind = VerdictKind::fail;
      v.detail = "functional infinite but lower bound stays at " + format_number(std::exp(top));
    }
    return v;
  }
  if (!(functional >= 0.0)) {
    v.detail = "functional undefined";
    return v;
  }
  const double lr = std::log(functional) - ll;
  v.ratio = std::exp(lr);
  const double ls = std::log(slack);
  if (lr >= -ls && lr <= ls) {
    v.kind = VerdictKind::pass;
  } else {
    v.kind = VerdictKind::fail;
    v.detail = "ratio I/L outside [1/" + format_number(slack) + ", " + format_number(slack) + "]";
  }
  return v;
}

}  // namespace morrey
