// SPDX-License-Identifier: Apache-2.0

#include "functionals.hpp"

#include <algorithm>
#include <optional>

namespace morrey {

// ---------------------------------------------------------------------------
// Classification

std::string tag_name(CaseTag t) {
  switch (t) {
    case CaseTag::A_i: return "A_i";
    case CaseTag::A_ii: return "A_ii";
    case CaseTag::B_i: return "B_i";
    case CaseTag::B_ii: return "B_ii";
    case CaseTag::B_iii: return "B_iii";
    case CaseTag::B_iv: return "B_iv";
    case CaseTag::C: return "C";
    case CaseTag::D_i: return "D_i";
    case CaseTag::D_ii: return "D_ii";
    case CaseTag::Unsupported: return "Unsupported";
  }
  return "Unsupported";
}

std::vector<CaseTag> supported_tags() {
  return {CaseTag::A_i, CaseTag::A_ii, CaseTag::B_i, CaseTag::B_ii, CaseTag::B_iii,
          CaseTag::B_iv, CaseTag::C, CaseTag::D_i, CaseTag::D_ii};
}

std::string TheoremCase::name() const {
  if (tag == CaseTag::Unsupported) return "Unsupported(" + reason + ")";
  return tag_name(tag);
}

std::vector<int> TheoremCase::components() const {
  switch (tag) {
    case CaseTag::A_i: return {1};
    case CaseTag::A_ii: return {2};
    case CaseTag::B_i: return {3, 4};
    case CaseTag::B_ii: return {3, 5, 6};
    case CaseTag::B_iii: return {4, 7, 8};
    case CaseTag::B_iv: return {6, 7, 9};
    case CaseTag::C: return {10};
    case CaseTag::D_i: return {11, 12};
    case CaseTag::D_ii: return {11, 13, 14};
    case CaseTag::Unsupported: return {};
  }
  return {};
}

TheoremCase classify(const ExponentQuad& e) {
  const double p1 = e.p1, p2 = e.p2, q1 = e.q1, q2 = e.q2;
  const bool equal = exponents_equal(p1, p2);
  if (!equal && p2 > p1) return {CaseTag::Unsupported, "p2>p1"};
  if (p2 >= q2) return {CaseTag::Unsupported, "p2>=q2"};
  if (equal) {
    if (q1 <= p1) return {CaseTag::C, ""};
    return {q1 <= q2 ? CaseTag::D_i : CaseTag::D_ii, ""};
  }
  if (q1 <= p2) return {p1 <= q2 ? CaseTag::A_i : CaseTag::A_ii, ""};
  if (std::max(p1, q1) <= q2) return {CaseTag::B_i, ""};
  if (p1 <= q2) return {CaseTag::B_ii, ""};  // q2 < q1 here
  if (q1 <= q2) return {CaseTag::B_iii, ""};  // q2 < p1 here
  return {CaseTag::B_iv, ""};
}

bool has_variants(int k) {
  switch (k) {
    case 4: case 6: case 9: case 10: case 12: case 13: case 14: return true;
    default: return false;
  }
}

std::string Admissibility::failure() const {
  for (const auto& c : checks)
    if (!c.passed) return c.condition + (c.detail.empty() ? "" : ": " + c.detail);
  return {};
}

// ---------------------------------------------------------------------------
// Evaluator

namespace {

constexpr double kRise = 0.01;  // per-probe growth that counts as unbounded

// Beyond this log-magnitude a change of kRise is below double resolution.
bool resolvable(double x) { return std::isfinite(x) && std::abs(x) * 1e-15 < kRise; }

// Three probes moving toward an endpoint; true when f keeps rising.
bool rising(const std::function<double(double)>& f, const std::array<double, 3>& ts) {
  const double a = f(ts[0]), b = f(ts[1]), c = f(ts[2]);
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) return (b == kInf || c == kInf);
  return b - a > kRise && c - b > kRise;
}

// Range maxima plus the endpoint behaviour beyond the table.
struct ProbedMax {
  RangeMax rm;
  bool head_inf = false, tail_inf = false;

  explicit ProbedMax(LogFn f) : rm(f) {
    head_inf = rising(f, {1e-9, 1e-11, 1e-13});
    tail_inf = rising(f, {1e9, 1e11, 1e13});
  }
  double query(double a, double b) const {
    if ((a == 0.0 && head_inf) || (std::isinf(b) && tail_inf)) return kInf;
    return rm.query(a, b);
  }
};

}  // namespace

struct FunctionalEvaluator::Impl {
  ReducedProblem r;
  FunctionalSettings s;
  double p1, p2, q1, q2, P = 0.0;
  std::unique_ptr<Cumulative> cw, cu, cv;
  double lW1_0 = 0.0;
  std::unique_ptr<ProbedMax> lr_max;
  // per-evaluation bookkeeping
  mutable double rel_err = 0.0;
  mutable bool resolved = true;
  mutable std::string why;

  Impl(const ReducedProblem& rp, FunctionalSettings st) : r(rp), s(std::move(st)) {
    p1 = r.e.p1;
    p2 = r.e.p2;
    q1 = r.e.q1;
    q2 = r.e.q2;
    Cumulative::Options o;
    o.quad = s.quad;
    cw = std::make_unique<Cumulative>(r.w, 1.0, o);
    cu = std::make_unique<Cumulative>(r.u, 1.0, o);
    lW1_0 = log_integrate_weighted(r.w, 1.0, 0.0, kInf, s.quad).log_value;
    if (!r.unity) {
      P = p1 * p2 / (p1 - p2);
      cv = std::make_unique<Cumulative>(r.dens_v, 1.0, o);
    }
  }

  double lW1(double t) const { return t == 0.0 ? lW1_0 : cw->log_to_inf(t); }
  double lW2(double t) const { return cu->log_to_inf(t); }
  double lV(double x, double t) const { return cv->log_between(x, t); }
  double lu(double t) const { return r.u.log_eval(t); }
  double lw(double t) const { return r.w.log_eval(t); }
  double lr(double t) const { return r.radial_ratio.log_eval(t) + r.log_angular_ratio; }

  // W1^{-q1/(q1-pp)} w1^{q1}
  double ldens(double s_, double pp) const { return -q1 / (q1 - pp) * lW1(s_) + lw(s_); }

  // log int_0^t ldens
  double lU(double t, double pp) const {
    const double kappa = -pp / (q1 - pp);
    const double x1 = kappa * lW1(t);
    const double x0 = lW1_0 == kInf ? -kInf : kappa * lW1_0;
    if (x1 - x0 > 1e-3) return log_sub(x1, x0) - std::log(pp / (q1 - pp));
    return integral([&](double z) { return ldens(z, pp); }, 0.0, t);
  }

  double sup(const std::function<double(double)>& f, double a, double b, double* arg = nullptr) const {
    const SupResult res = sup_search(f, a, b, s.sup);
    if (arg) *arg = res.argsup;
    if (!res.defined) return -kInf;
    if (res.sup == kInf) return kInf;
    if (std::isinf(b)) {
      const double base = std::max(1e6, a * 1e6);
      if (rising(f, {base, base * 100, base * 1e4})) {
        if (why.empty()) why = "objective unbounded as t -> inf";
        return kInf;
      }
    }
    if (a == 0.0) {
      const double base = std::min(1e-6, b * 1e-6);
      if (rising(f, {base, base * 1e-2, base * 1e-4})) {
        if (why.empty()) why = "objective unbounded as t -> 0";
        return kInf;
      }
    }
    return res.sup;
  }

  double integral(const LogFn& f, double a, double b) const {
    // t f(t) must decay at the ends for convergence
    auto tf = [&f](double t) { return f(t) + std::log(t); };
    // past the last probe t f(t) is capped at its probe value: far nodes of
    // the quadrature can sit where cancelling exponents are unresolved
    double hi_t = kInf, hi_cap = kInf, lo_t = 0.0, lo_cap = kInf;
    if (std::isinf(b)) {
      const double base = std::max(1e6, a * 1e6);
      const double x = tf(base), y = tf(base * 100), z = tf(base * 1e4);
      if (resolvable(x) && y - x > -kRise && z - y > -kRise) {
        if (why.empty()) why = "integrand not integrable at inf";
        return kInf;
      }
      if (!std::isnan(z)) hi_t = base * 1e4, hi_cap = z;
    }
    if (a == 0.0) {
      const double base = std::min(1e-6, b * 1e-6);
      const double x = tf(base), y = tf(base * 1e-2), z = tf(base * 1e-4);
      if (resolvable(x) && y - x > -kRise && z - y > -kRise) {
        if (why.empty()) why = "integrand not integrable at 0";
        return kInf;
      }
      if (!std::isnan(z)) lo_t = base * 1e-4, lo_cap = z;
    }
    LogFn g = f;
    if (hi_cap < kInf || lo_cap < kInf) {
      g = [&f, hi_t, hi_cap, lo_t, lo_cap](double t) {
        double v = f(t);
        if (t > hi_t) v = std::min(v, hi_cap - std::log(t));
        if (t < lo_t) v = std::min(v, lo_cap - std::log(t));
        return v;
      };
    }
    const LogQuad q = integrate_log(g, a, b, s.quad);
    rel_err = std::max(rel_err, q.rel_error);
    resolved = resolved && q.converged;
    return q.log_value;
  }

  // Coarse location of the integrand peak, used as a seed hint.
  double peak(const LogFn& f) const {
    double best = -kInf, arg = 1.0;
    for (int i = -48; i <= 48; ++i) {
      const double t = std::pow(10.0, i / 8.0);
      const double v = f(t) + std::log(t);
      if (v > best) best = v, arg = t;
    }
    return arg;
  }

  Variant var(int k) const { return s.variant[static_cast<std::size_t>(k)]; }

  const ProbedMax& lr_table() {
    if (!lr_max) lr_max = std::make_unique<ProbedMax>([this](double t) { return lr(t); });
    return *lr_max;
  }

  // -------------------------------------------------------------------------
  // p2 < p1

  double I1(double* arg) const {
    return sup(
        [&](double x) {
          const double inner = sup([&](double t) { return lV(x, t) / P + lW2(t) / q2; }, x, kInf);
          return -lW1(x) / q1 + inner;
        },
        0.0, kInf, arg);
  }

  // log int_x^inf V(x,t)^alpha W2^beta u
  double tail_term(double x, double beta) const {
    const double alpha = q2 * p1 / (P * (p1 - q2));
    return integral([&](double t) { return alpha * lV(x, t) + beta * lW2(t) + lu(t); }, x, kInf);
  }

  double I2(double* arg) const {
    const double e = (p1 - q2) / (p1 * q2);
    return sup([&](double x) { return -lW1(x) / q1 + e * tail_term(x, q2 / (p1 - q2)); }, 0.0, kInf, arg);
  }

  double I3(double* arg) const {
    if (lW1_0 == kInf) return -kInf;
    return -lW1_0 / q1 + sup([&](double t) { return lV(0.0, t) / P + lW2(t) / q2; }, 0.0, kInf, arg);
  }

  double a4() const { return q1 * (p1 - p2) / (p1 * (q1 - p2)); }

  // log int_0^t V(s,t)^a dens1(s) ds
  double head_term(double t, double a) const {
    return integral([&](double z) { return a * lV(z, t) + ldens(z, p2); }, 0.0, t);
  }

  double I4(double* arg) const {
    const double e = var(4) == Variant::printed ? (p1 - q2) / (q1 * q2) : (q1 - p2) / (q1 * p2);
    return sup([&](double t) { return lW2(t) / q2 + e * head_term(t, a4()); }, 0.0, kInf, arg);
  }

  double outer_exponent() const { return (q1 - q2) / (q1 * q2); }
  double b5() const { return q1 * (q2 - p2) / (p2 * (q1 - q2)); }

  double I5(double* arg) const {
    const double c5 = q1 * q2 * (p1 - p2) / (p1 * p2 * (q1 - q2));
    const double d = q1 / (q1 - q2);
    LogFn f = [&](double t) {
      const double tail = sup([&](double z) { return c5 * lV(t, z) + d * lW2(z); }, t, kInf);
      return b5() * lU(t, p2) + ldens(t, p2) + tail;
    };
    if (arg) *arg = peak(f);
    return outer_exponent() * integral(f, 0.0, kInf);
  }

  double I6(double* arg) const {
    const double a6 = var(6) == Variant::printed ? q1 * (q2 - p2) / (p1 * (q1 - p2)) : a4();
    const double d = q1 / (q1 - q2);
    LogFn f = [&](double t) {
      const double tail = sup([&](double z) { return a4() * lV(t, z) + d * lW2(z); }, t, kInf);
      return b5() * head_term(t, a6) + tail + ldens(t, p2);
    };
    if (arg) *arg = peak(f);
    return outer_exponent() * integral(f, 0.0, kInf);
  }

  double I7(double* arg) const {
    if (lW1_0 == kInf) return -kInf;
    const double alpha = q2 * p1 / (P * (p1 - q2));
    const double beta = q2 / (p1 - q2);
    LogFn f = [&](double t) { return alpha * lV(0.0, t) + beta * lW2(t) + lu(t); };
    if (arg) *arg = peak(f);
    return -lW1_0 / q1 + (p1 - q2) / (p1 * q2) * integral(f, 0.0, kInf);
  }

  double I8(double* arg) const {
    const double e = (p1 - q2) / (p1 * q2);
    return sup(
        [&](double t) { return (q1 - p2) / (q1 * p2) * lU(t, p2) + e * tail_term(t, q2 / (p1 - q2)); },
        0.0, kInf, arg);
  }

  double I9(double* arg) const {
    const bool printed = var(9) == Variant::printed;
    const double d9 = printed ? q1 / (p1 - q2) : q2 / (p1 - q2);
    const double c9 = printed ? q1 * (p1 - q2) / (q1 - q2) : q1 * (p1 - q2) / (p1 * (q1 - q2));
    LogFn f = [&](double t) { return b5() * lU(t, p2) + ldens(t, p2) + c9 * tail_term(t, d9); };
    if (arg) *arg = peak(f);
    return outer_exponent() * integral(f, 0.0, kInf);
  }

  // -------------------------------------------------------------------------
  // p1 == p2

  double I10(double* arg) {
    const double e = var(10) == Variant::printed ? p1 : 1.0;
    ProbedMax inner([&](double tau) { return e * lr(tau) - lW1(tau) / q1; });
    return sup([&](double x) { return lW2(x) / q2 + inner.query(0.0, x); }, 0.0, kInf, arg);
  }

  double I11(double* arg) {
    if (lW1_0 == kInf) return -kInf;
    const ProbedMax& m = lr_table();
    return -lW1_0 / q1 + sup([&](double t) { return lW2(t) / q2 + m.query(0.0, t); }, 0.0, kInf, arg);
  }

  double e_d(int k) const { return var(k) == Variant::printed ? p1 : p1 * q1 / (q1 - p1); }

  // log int_0^t densD(x) (sup_{(x,t)} v2/v1)^e dx
  double head_d(double t, double e) {
    const ProbedMax& m = lr_table();
    return integral([&](double x) { return ldens(x, p1) + e * m.query(x, t); }, 0.0, t);
  }

  double I12(double* arg) {
    const double e = e_d(12);
    return sup([&](double t) { return (q1 - p1) / (q1 * p1) * head_d(t, e) + lW2(t) / q2; }, 0.0, kInf, arg);
  }

  double b13() const { return q1 * (q2 - p1) / (p1 * (q1 - q2)); }

  double I13(double* arg) {
    const double e = var(13) == Variant::printed ? q2 * (q1 - p1) / (q1 - q2) : q1 * q2 / (q1 - q2);
    const double d = q1 / (q1 - q2);
    ProbedMax tail([&](double z) { return e * lr(z) + d * lW2(z); });
    LogFn f = [&](double t) { return b13() * lU(t, p1) + ldens(t, p1) + tail.query(t, kInf); };
    if (arg) *arg = peak(f);
    return outer_exponent() * integral(f, 0.0, kInf);
  }

  double I14(double* arg) {
    const double e = e_d(14);
    const double d = q1 / (q1 - q2);
    ProbedMax tail([&](double z) { return e * lr(z) + d * lW2(z); });
    LogFn f = [&](double t) { return b13() * head_d(t, e) + tail.query(t, kInf) + ldens(t, p1); };
    if (arg) *arg = peak(f);
    return outer_exponent() * integral(f, 0.0, kInf);
  }

  double log_value(int k, double* arg) {
    switch (k) {
      case 1: return I1(arg);
      case 2: return I2(arg);
      case 3: return I3(arg);
      case 4: return I4(arg);
      case 5: return I5(arg);
      case 6: return I6(arg);
      case 7: return I7(arg);
      case 8: return I8(arg);
      case 9: return I9(arg);
      case 10: return I10(arg);
      case 11: return I11(arg);
      case 12: return I12(arg);
      case 13: return I13(arg);
      case 14: return I14(arg);
      default: throw DomainError("functional index must be in 1..14");
    }
  }
};

FunctionalEvaluator::FunctionalEvaluator(const ReducedProblem& r, FunctionalSettings s)
    : impl_(std::make_unique<Impl>(r, std::move(s))) {}

FunctionalEvaluator::~FunctionalEvaluator() = default;

Component FunctionalEvaluator::eval(int k) const {
  if (k < 1 || k > 14) throw DomainError("functional index must be in 1..14");
  Impl& m = *impl_;
  if (k <= 9 && m.r.unity) throw DomainError("I" + std::to_string(k) + " needs p2 < p1");
  if (k >= 10 && !m.r.unity) throw DomainError("I" + std::to_string(k) + " needs p1 = p2");
  m.rel_err = 0.0;
  m.resolved = true;
  m.why.clear();
  Component c;
  c.k = k;
  c.variant = m.var(k);
  const double l = m.log_value(k, &c.argsup);
  c.resolved = m.resolved;
  if (l == kInf) {
    c.value = kInf;
    c.divergence = m.why.empty() ? "nested term is infinite" : m.why;
    return c;
  }
  c.value = std::isnan(l) ? std::nan("") : std::exp(l);
  c.error = c.value * (m.rel_err + 1e-9);
  return c;
}

namespace {

FunctionalValue combine(std::vector<Component> parts) {
  FunctionalValue v;
  for (const auto& c : parts) {
    v.value += c.value;
    v.error_estimate += c.error;
    if (!std::isfinite(c.value)) v.finite = false;
  }
  v.components = std::move(parts);
  return v;
}

}  // namespace

FunctionalValue eval_functional(int k, const ReducedProblem& r, const FunctionalSettings& s) {
  FunctionalEvaluator ev(r, s);
  return combine({ev.eval(k)});
}

FunctionalValue embedding_norm_estimate(const TheoremCase& c, const ReducedProblem& r,
                                        const FunctionalSettings& s) {
  if (!c.supported()) throw UnsupportedError("no characterization for case " + c.name());
  FunctionalEvaluator ev(r, s);
  std::vector<Component> parts;
  for (int k : c.components()) parts.push_back(ev.eval(k));
  return combine(std::move(parts));
}

// ---------------------------------------------------------------------------
// Admissibility

Admissibility check_admissibility(const TheoremCase& c, const ReducedProblem& r) {
  Admissibility a;
  auto add = [&a](std::string cond, bool ok, std::string detail = {}) {
    a.checks.push_back({std::move(cond), ok, std::move(detail)});
    a.passed = a.passed && ok;
  };
  if (!c.supported()) {
    add("supported parameter region", false, c.name());
    return a;
  }
  const bool t1 = r.w.pieces().back().body.shape().integrable_at_infinity();
  const bool t2 = r.u.pieces().back().body.shape().integrable_at_infinity();
  add("int_t^inf w1^q1 < inf", t1, t1 ? "" : "degenerate space: infinite tail");
  add("int_t^inf w2^q2 < inf", t2, t2 ? "" : "degenerate space: infinite tail");
  if (!t1 || !t2) return a;

  static const std::array<double, 9> probes = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
  const double p1 = r.e.p1, p2 = r.e.p2, q1 = r.e.q1;
  auto finite_positive = [](double l) { return l > -kInf && l < kInf; };

  const bool b_case = c.tag == CaseTag::B_i || c.tag == CaseTag::B_ii || c.tag == CaseTag::B_iii ||
                      c.tag == CaseTag::B_iv;
  if (b_case) {
    Cumulative cw(r.w, 1.0), cv(r.dens_v, 1.0);
    const double a4 = q1 * (p1 - p2) / (p1 * (q1 - p2));
    bool ok = true;
    std::string detail;
    for (double t : probes) {
      const LogQuad q = integrate_log(
          [&](double s_) { return a4 * cv.log_between(s_, t) - q1 / (q1 - p2) * cw.log_to_inf(s_) + r.w.log_eval(s_); },
          0.0, t);
      if (!finite_positive(q.log_value)) {
        ok = false;
        detail = "fails at t=" + format_number(t);
        break;
      }
    }
    add("0 < int_0^t V(s,t)^a W1(s)^{-q1/(q1-p2)} w1(s)^q1 ds < inf", ok, detail);
  }
  if (c.tag == CaseTag::D_i || c.tag == CaseTag::D_ii) {
    add("v1^-1 v2 continuous", r.ratio_continuous,
        r.ratio_continuous ? "" : "ratio jumps across a breakpoint or varies on the sphere");
    const double ev = p1 * q1 / (q1 - p1);
    const double e2 = -r.e.q2 * p1 / (r.e.q2 - p1);
    bool ok1 = true, ok2 = true, ok3 = true;
    Cumulative cw(r.w, 1.0);
    for (double t : probes) {
      const double l1 = log_integrate_weighted(r.radial_ratio, ev, 0.0, t).log_value;
      if (!finite_positive(l1)) ok1 = false;
      const LogQuad l2 = integrate_log(
          [&](double x) { return -q1 / (q1 - p1) * cw.log_to_inf(x) + r.w.log_eval(x); }, 0.0, t);
      if (!finite_positive(l2.log_value)) ok2 = false;
      const double l3 = log_integrate_weighted(r.u.pow(1.0 / r.e.q2), e2, 0.0, t).log_value;
      if (!finite_positive(l3)) ok3 = false;
    }
    add("0 < int_0^t esssup_{|x|=tau} v^{q1/(q1-p1)} < inf", ok1);
    add("0 < int_0^t W1^{-q1/(q1-p1)} w1^q1 < inf", ok2);
    add("0 < int_0^t w2^{-q2 p1/(q2-p1)} < inf", ok3);
  }
  return a;
}

}  // namespace morrey
