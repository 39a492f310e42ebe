// SPDX-License-Identifier: Apache-2.0

#include "scenario.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

namespace morrey {

using nlohmann::json;

std::string task_name(Task t) {
  switch (t) {
    case Task::classify: return "classify";
    case Task::evaluate: return "evaluate";
    case Task::oracle: return "oracle";
    case Task::verify: return "verify";
    case Task::complementary: return "complementary";
  }
  return "verify";
}

Task parse_task(std::string_view s) {
  for (Task t : {Task::classify, Task::evaluate, Task::oracle, Task::verify, Task::complementary})
    if (s == task_name(t)) return t;
  throw ConfigError("unknown task '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v, const std::string& key) {
  if (v == "inf") return kInf;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || std::isnan(x))
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  return x;
}

long to_int(const std::string& v, const std::string& key) {
  const double x = to_double(v, key);
  if (x != std::floor(x) || std::abs(x) > 1e15) throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  return static_cast<long>(x);
}

bool valid_name(const std::string& n) {
  if (n.empty()) return false;
  for (char c : n)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

using Section = std::vector<std::pair<std::string, std::string>>;

void apply(Scenario& s, const std::string& key, const std::string& v) {
  static const std::map<std::string, std::function<void(Scenario&, const std::string&, const std::string&)>> setters = {
      {"description", [](Scenario& s, const std::string&, const std::string& v) { s.description = v; }},
      {"dim",
       [](Scenario& s, const std::string& k, const std::string& v) {
         s.dim = static_cast<int>(to_int(v, k));
         if (s.dim < 1) throw ConfigError("dim must be >= 1");
       }},
      {"p1", [](Scenario& s, const std::string& k, const std::string& v) { s.p1 = to_double(v, k); }},
      {"p2", [](Scenario& s, const std::string& k, const std::string& v) { s.p2 = to_double(v, k); }},
      {"q1", [](Scenario& s, const std::string& k, const std::string& v) { s.q1 = to_double(v, k); }},
      {"q2", [](Scenario& s, const std::string& k, const std::string& v) { s.q2 = to_double(v, k); }},
      {"v1", [](Scenario& s, const std::string&, const std::string& v) { s.v1 = v; }},
      {"v2", [](Scenario& s, const std::string&, const std::string& v) { s.v2 = v; }},
      {"w1", [](Scenario& s, const std::string&, const std::string& v) { s.w1 = v; }},
      {"w2", [](Scenario& s, const std::string&, const std::string& v) { s.w2 = v; }},
      {"v1_angular", [](Scenario& s, const std::string&, const std::string& v) { s.a1 = v; }},
      {"v2_angular", [](Scenario& s, const std::string&, const std::string& v) { s.a2 = v; }},
      {"task", [](Scenario& s, const std::string&, const std::string& v) { s.task = parse_task(v); }},
      {"rel_tol", [](Scenario& s, const std::string& k, const std::string& v) { s.settings.quad.rel_tol = to_double(v, k); }},
      {"max_level",
       [](Scenario& s, const std::string& k, const std::string& v) { s.settings.quad.max_level = static_cast<int>(to_int(v, k)); }},
      {"max_depth",
       [](Scenario& s, const std::string& k, const std::string& v) { s.settings.quad.max_depth = static_cast<int>(to_int(v, k)); }},
      {"sup_per_decade",
       [](Scenario& s, const std::string& k, const std::string& v) { s.settings.sup.per_decade = static_cast<int>(to_int(v, k)); }},
      {"sup_lo", [](Scenario& s, const std::string& k, const std::string& v) { s.settings.sup.lo = to_double(v, k); }},
      {"sup_hi", [](Scenario& s, const std::string& k, const std::string& v) { s.settings.sup.hi = to_double(v, k); }},
      {"sup_bracket",
       [](Scenario& s, const std::string& k, const std::string& v) { s.settings.sup.bracket_tol = to_double(v, k); }},
      {"knots", [](Scenario& s, const std::string& k, const std::string& v) { s.search.knots = static_cast<int>(to_int(v, k)); }},
      {"support_lo", [](Scenario& s, const std::string& k, const std::string& v) { s.search.lo = to_double(v, k); }},
      {"support_hi", [](Scenario& s, const std::string& k, const std::string& v) { s.search.hi = to_double(v, k); }},
      {"restarts",
       [](Scenario& s, const std::string& k, const std::string& v) { s.search.restarts = static_cast<int>(to_int(v, k)); }},
      {"sweeps", [](Scenario& s, const std::string& k, const std::string& v) { s.search.sweeps = static_cast<int>(to_int(v, k)); }},
      {"seed",
       [](Scenario& s, const std::string& k, const std::string& v) {
         const long x = to_int(v, k);
         if (x < 0) throw ConfigError("seed must be >= 0");
         s.search.seed = static_cast<std::uint64_t>(x);
       }},
      {"slack", [](Scenario& s, const std::string& k, const std::string& v) { s.search.slack = to_double(v, k); }},
      {"witness_bound", [](Scenario& s, const std::string& k, const std::string& v) { s.search.witness_bound = to_double(v, k); }},
      {"witness_steps",
       [](Scenario& s, const std::string& k, const std::string& v) { s.search.witness_steps = static_cast<int>(to_int(v, k)); }},
      {"expect_tag", [](Scenario& s, const std::string&, const std::string& v) { s.expect_tag = v; }},
      {"expect_verdict", [](Scenario& s, const std::string&, const std::string& v) { s.expect_verdict = v; }},
      {"baseline_I", [](Scenario& s, const std::string& k, const std::string& v) { s.baseline_i = to_double(v, k); }},
      {"baseline_L", [](Scenario& s, const std::string& k, const std::string& v) { s.baseline_l = to_double(v, k); }},
      {"baseline_tol", [](Scenario& s, const std::string& k, const std::string& v) { s.baseline_tol = to_double(v, k); }},
  };
  if (key.rfind("variant.", 0) == 0) {
    Variant var;
    if (v == "printed") {
      var = Variant::printed;
    } else if (v == "corrected") {
      var = Variant::corrected;
    } else {
      throw ConfigError("key '" + key + "': variant must be 'printed' or 'corrected'");
    }
    const std::string which = key.substr(8);
    if (which == "all") {
      for (int k = 1; k <= 14; ++k)
        if (has_variants(k)) s.settings.variant[static_cast<std::size_t>(k)] = var;
      return;
    }
    if (which.size() < 2 || which[0] != 'I') throw ConfigError("unknown key '" + key + "'");
    const long k = to_int(which.substr(1), key);
    if (k < 1 || k > 14 || !has_variants(static_cast<int>(k)))
      throw ConfigError("key '" + key + "': I" + std::to_string(k) + " has no exponent variants");
    s.settings.variant[static_cast<std::size_t>(k)] = var;
    return;
  }
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown key '" + key + "'");
  it->second(s, key, v);
}

void validate(const Scenario& s) {
  if (!(s.p1 > 0 && s.p2 > 0 && s.q1 > 0 && s.q2 > 0))
    throw ConfigError("scenario '" + s.name + "': exponents p1, p2, q1, q2 are required and must be positive");
  // w1/w2 may be absent here: the command line can still pick classify
  try {
    parse_weight(s.v1);
    parse_weight(s.v2);
    if (!s.w1.empty()) parse_weight(s.w1);
    if (!s.w2.empty()) parse_weight(s.w2);
    parse_angular(s.a1, s.dim);
    parse_angular(s.a2, s.dim);
  } catch (const Error& e) {
    throw ConfigError("scenario '" + s.name + "': " + e.what());
  }
  if (s.search.knots < 1) throw ConfigError("scenario '" + s.name + "': knots must be >= 1");
  if (s.search.restarts < 0) throw ConfigError("scenario '" + s.name + "': restarts must be >= 0");
  if (!(s.search.slack > 1.0)) throw ConfigError("scenario '" + s.name + "': slack must exceed 1");
  if (!(s.search.lo > 0 && s.search.lo < s.search.hi))
    throw ConfigError("scenario '" + s.name + "': support range must satisfy 0 < lo < hi");
}

}  // namespace

AngularWeight parse_angular(std::string_view text, int dim) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty angular weight");
  if (t.front() != '[') {
    const double c = to_double(t, "angular");
    if (!(c > 0) || !std::isfinite(c)) throw ConfigError("angular constant must be positive and finite");
    return AngularWeight::constant(c);
  }
  if (t.back() != ']') throw ConfigError("angular list must end with ']'");
  std::vector<double> vals;
  std::stringstream ss(t.substr(1, t.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double x = to_double(trim(item), "angular");
    if (!(x > 0) || !std::isfinite(x)) throw ConfigError("angular values must be positive and finite");
    vals.push_back(x);
  }
  return AngularWeight::tabulated(dim, std::move(vals));
}

std::vector<Scenario> parse_config(std::string_view text) {
  Section defaults;
  std::vector<std::pair<std::string, Section>> scenarios;
  Section* cur = nullptr;
  std::set<std::string> keys_in_section;
  bool seen_defaults = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& m) { throw ConfigError("line " + std::to_string(line_no) + ": " + m); };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      const std::string h = trim(line.substr(1, line.size() - 2));
      keys_in_section.clear();
      if (h == "defaults") {
        if (seen_defaults) fail("duplicate [defaults] section");
        seen_defaults = true;
        cur = &defaults;
      } else if (h.rfind("scenario ", 0) == 0) {
        const std::string name = trim(h.substr(9));
        if (!valid_name(name)) fail("scenario names use letters, digits, '_', '-', '.'");
        for (const auto& [n, _] : scenarios)
          if (n == name) fail("duplicate scenario '" + name + "'");
        scenarios.emplace_back(name, Section{});
        cur = &scenarios.back().second;
      } else {
        fail("unknown section [" + h + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    if (!cur) fail("key outside a section");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!keys_in_section.insert(key).second) fail("duplicate key '" + key + "'");
    // checked here so the error carries the line number
    try {
      Scenario probe;
      apply(probe, key, value);
    } catch (const ConfigError& e) {
      fail(e.what());
    }
    cur->emplace_back(key, value);
  }
  std::vector<Scenario> out;
  for (const auto& [name, sec] : scenarios) {
    Scenario s;
    s.name = name;
    for (const auto& [k, v] : defaults) apply(s, k, v);
    for (const auto& [k, v] : sec) apply(s, k, v);
    validate(s);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string Scenario::to_config() const {
  std::ostringstream o;
  auto kv = [&o](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
  o << "[scenario " << name << "]\n";
  if (!description.empty()) kv("description", description);
  kv("task", task_name(task));
  kv("dim", std::to_string(dim));
  kv("p1", format_number(p1));
  kv("p2", format_number(p2));
  kv("q1", format_number(q1));
  kv("q2", format_number(q2));
  kv("v1", v1);
  kv("v2", v2);
  kv("v1_angular", a1);
  kv("v2_angular", a2);
  if (!w1.empty()) kv("w1", w1);
  if (!w2.empty()) kv("w2", w2);
  kv("rel_tol", format_number(settings.quad.rel_tol));
  kv("max_level", std::to_string(settings.quad.max_level));
  kv("max_depth", std::to_string(settings.quad.max_depth));
  kv("sup_per_decade", std::to_string(settings.sup.per_decade));
  kv("sup_lo", format_number(settings.sup.lo));
  kv("sup_hi", format_number(settings.sup.hi));
  kv("sup_bracket", format_number(settings.sup.bracket_tol));
  for (int k = 1; k <= 14; ++k)
    if (has_variants(k))
      kv("variant.I" + std::to_string(k),
         settings.variant[static_cast<std::size_t>(k)] == Variant::printed ? "printed" : "corrected");
  kv("knots", std::to_string(search.knots));
  kv("support_lo", format_number(search.lo));
  kv("support_hi", format_number(search.hi));
  kv("restarts", std::to_string(search.restarts));
  kv("sweeps", std::to_string(search.sweeps));
  kv("seed", std::to_string(search.seed));
  kv("slack", format_number(search.slack));
  kv("witness_bound", format_number(search.witness_bound));
  kv("witness_steps", std::to_string(search.witness_steps));
  if (expect_tag) kv("expect_tag", *expect_tag);
  if (expect_verdict) kv("expect_verdict", *expect_verdict);
  if (baseline_i) kv("baseline_I", format_number(*baseline_i));
  if (baseline_l) kv("baseline_L", format_number(*baseline_l));
  kv("baseline_tol", format_number(baseline_tol));
  return o.str();
}

// ---------------------------------------------------------------------------
// Pipelines

Scenario complementary_scenario(const Scenario& s) {
  Scenario t = s;
  t.task = Task::verify;
  const int n = s.dim;
  auto rewrite = [n](const std::string& v, const std::string& w, double p, double q, std::string& v_out,
                     std::string& w_out) {
    const RnWeight rv{n, parse_weight(v), AngularWeight{}};
    const ComplementaryPair c = complementary_transform(rv, parse_weight(w), p, q);
    v_out = c.v.radial.str();
    w_out = c.w.str();
  };
  rewrite(s.v1, s.w1, s.p1, s.q1, t.v1, t.w1);
  rewrite(s.v2, s.w2, s.p2, s.q2, t.v2, t.w2);
  return t;
}

namespace {

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json measured(double value, double error) { return {{"value", num(value)}, {"error", num(error)}}; }
json exact(double value) { return {{"value", num(value)}, {"exact", true}}; }

std::string variant_name(Variant v) { return v == Variant::printed ? "printed" : "corrected"; }

}  // namespace

Report run_scenario(const Scenario& scenario, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.scenario = scenario;
  if (opts.seed) r.scenario.search.seed = *opts.seed;
  if (opts.slack) r.scenario.search.slack = *opts.slack;
  r.task = opts.task.value_or(scenario.task);
  try {
    Scenario work = r.scenario;
    Task task = r.task;
    if (task == Task::complementary) {
      work = complementary_scenario(r.scenario);
      r.transformed = work;
      task = Task::verify;
    }
    const ExponentQuad e = work.exponents();
    const TheoremCase c = classify(e);
    r.tag = c.name();
    r.supported = c.supported();
    if (task != Task::classify) {
      if (work.w1.empty() || work.w2.empty()) throw ConfigError("w1 and w2 are required for " + task_name(task));
      const RnWeight v1{work.dim, parse_weight(work.v1), parse_angular(work.a1, work.dim)};
      const RnWeight v2{work.dim, parse_weight(work.v2), parse_angular(work.a2, work.dim)};
      const WeightExpr w1 = parse_weight(work.w1), w2 = parse_weight(work.w2);
      std::vector<double> hints;
      if (task == Task::evaluate || task == Task::verify || (task == Task::oracle && c.supported())) {
        if (!c.supported()) {
          Admissibility a;
          a.passed = false;
          a.checks.push_back({"theorem case", false, c.reason});
          r.admissibility = a;
        } else {
          const ReducedProblem rp = reduce_problem(work.dim, e, v1, v2, w1, w2);
          r.admissibility = check_admissibility(c, rp);
          if (r.admissibility->passed && task != Task::oracle) {
            r.functional = embedding_norm_estimate(c, rp, work.settings);
            for (const auto& comp : r.functional->components) hints.push_back(comp.argsup);
          }
        }
      }
      const bool admissible = !r.admissibility || r.admissibility->passed;
      if (admissible && (task == Task::oracle || task == Task::verify)) {
        const SpacePair sp = SpacePair::make(work.dim, e, v1, v2, w1, w2);
        if (task == Task::verify && r.functional && !r.functional->finite) {
          r.oracle = divergence_witness(sp, work.search, hints);
        } else {
          r.oracle = best_constant_search(sp, work.search, hints);
        }
        if (task == Task::verify)
          r.verdict = verify_equivalence(r.functional->value, *r.oracle, work.search.slack, work.search.witness_bound);
      }
    }
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<Report> run_all(const std::vector<Scenario>& ss, const RunOptions& opts, unsigned workers) {
  std::vector<Report> out(ss.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, ss.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < ss.size(); i = next++) out[i] = run_scenario(ss[i], opts);
  };
  if (workers == 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

int Report::exit_code() const {
  if (!error.empty()) return 1;
  if (admissibility && !admissibility->passed) return 2;
  if (verdict && !verdict->passed()) return 3;
  return 0;
}

json Report::to_json() const {
  json j;
  j["scenario"] = scenario.name;
  j["task"] = task_name(task);
  j["config"] = scenario.to_config();
  j["seed"] = scenario.search.seed;
  j["rng"] = "mt19937_64";
  j["tag"] = tag;
  j["supported"] = supported;
  j["exit_code"] = exit_code();
  if (!error.empty()) j["error"] = error;
  if (transformed) j["transformed_config"] = transformed->to_config();
  if (admissibility) {
    json checks = json::array();
    for (const auto& c : admissibility->checks)
      checks.push_back({{"condition", c.condition}, {"passed", c.passed}, {"detail", c.detail}});
    j["admissibility"] = {{"passed", admissibility->passed}, {"checks", checks}};
  }
  if (functional) {
    json comps = json::array();
    for (const auto& c : functional->components) {
      json cj = {{"name", c.name()},
                 {"value", measured(c.value, c.error)},
                 {"argsup", {{"value", num(c.argsup)}, {"error", "grid bracket"}}},
                 {"variant", has_variants(c.k) ? variant_name(c.variant) : "single"},
                 {"resolved", c.resolved}};
      if (!c.divergence.empty()) cj["divergence"] = c.divergence;
      comps.push_back(cj);
    }
    j["functional"] = {{"total", measured(functional->value, functional->error_estimate)},
                       {"finite", functional->finite},
                       {"components", comps}};
  }
  if (oracle) {
    json o;
    o["defined"] = oracle->defined;
    o["lower_bound"] = measured(oracle->lower_bound, oracle->error_estimate);
    o["log_lower_bound"] = measured(oracle->log_lower_bound,
                                    oracle->lower_bound > 0 ? oracle->error_estimate / oracle->lower_bound : std::numeric_limits<double>::quiet_NaN());
    o["evaluations"] = oracle->evaluations;
    o["rng"] = oracle->rng;
    o["seed"] = oracle->seed;
    json knots = json::array(), values = json::array();
    for (double k : oracle->g.knots) knots.push_back({{"value", num(k)}, {"exact", true}});
    for (double v : oracle->g.values) values.push_back({{"value", num(v)}, {"exact", true}});
    o["argmax"] = {{"knots", knots}, {"values", values}};
    if (!oracle->widening.empty()) {
      json w = json::array();
      for (const auto& s : oracle->widening)
        w.push_back({{"lo", exact(s.lo)},
                     {"hi", exact(s.hi)},
                     {"log_lower_bound", {{"value", num(s.log_lower_bound)}, {"error", "search lower bound"}}}});
      o["widening"] = w;
    }
    if (!oracle->failure.empty()) o["failure"] = oracle->failure;
    j["oracle"] = o;
  }
  if (verdict) {
    j["verify"] = {{"verdict", verdict->name()},
                   {"ratio", {{"value", num(verdict->ratio)}, {"error", "propagated from I and L"}}},
                   {"slack", exact(scenario.search.slack)},
                   {"detail", verdict->detail}};
  }
  j["seconds"] = seconds;
  return j;
}

// ---------------------------------------------------------------------------
// Summary and golden comparison

namespace {

std::string g10(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

std::string summary_header() { return "scenario,tag,I_total,components,oracle_L,ratio,verdict,seconds"; }

std::string summary_row(const Report& r, bool omit_timing) {
  std::ostringstream o;
  o << r.scenario.name << "," << r.tag << ",";
  if (r.functional) o << g10(r.functional->value);
  o << ",";
  if (r.functional) {
    bool first = true;
    for (const auto& c : r.functional->components) {
      o << (first ? "" : ";") << c.name() << "=" << g10(c.value);
      first = false;
    }
  }
  o << ",";
  if (r.oracle && r.oracle->defined) o << g10(r.oracle->lower_bound);
  o << ",";
  if (r.verdict) o << g10(r.verdict->ratio);
  o << ",";
  if (!r.error.empty()) {
    o << "ERROR";
  } else if (r.admissibility && !r.admissibility->passed) {
    o << "INADMISSIBLE";
  } else if (r.verdict) {
    o << r.verdict->name();
  } else {
    o << "OK";
  }
  o << ",";
  if (!omit_timing) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
    o << buf;
  }
  return o.str();
}

bool GoldenSummary::passed() const {
  if (!missing_tags.empty()) return false;
  for (const auto& o : outcomes)
    if (!o.passed) return false;
  return true;
}

namespace {

bool close(double got, double want, double tol) {
  if (std::isinf(want) || std::isinf(got)) return got == want;
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

std::string verdict_word(const Report& r) {
  if (!r.error.empty()) return "ERROR";
  if (r.admissibility && !r.admissibility->passed) return "INADMISSIBLE";
  if (r.verdict) return r.verdict->name();
  return "OK";
}

}  // namespace

GoldenSummary compare_golden(const std::vector<Report>& reports) {
  GoldenSummary out;
  std::set<std::string> tags;
  for (const auto& r : reports) {
    GoldenOutcome g;
    g.scenario = r.scenario.name;
    const Scenario& s = r.scenario;
    if (r.exit_code() == 1 && !(s.expect_verdict && *s.expect_verdict == "ERROR"))
      g.deviations.push_back("error: " + r.error);
    if (s.expect_tag && r.tag != *s.expect_tag) g.deviations.push_back("tag " + r.tag + ", expected " + *s.expect_tag);
    if (s.expect_verdict && verdict_word(r) != *s.expect_verdict)
      g.deviations.push_back("verdict " + verdict_word(r) + ", expected " + *s.expect_verdict);
    if (s.baseline_i) {
      if (!r.functional) {
        g.deviations.push_back("no functional value to compare with baseline_I");
      } else if (!close(r.functional->value, *s.baseline_i, s.baseline_tol)) {
        g.deviations.push_back("I_total " + g10(r.functional->value) + ", baseline " + g10(*s.baseline_i));
      }
    }
    if (s.baseline_l) {
      if (!r.oracle || !r.oracle->defined) {
        g.deviations.push_back("no oracle bound to compare with baseline_L");
      } else if (!close(r.oracle->lower_bound, *s.baseline_l, s.baseline_tol)) {
        g.deviations.push_back("oracle_L " + g10(r.oracle->lower_bound) + ", baseline " + g10(*s.baseline_l));
      }
    }
    g.passed = g.deviations.empty();
    if (r.supported && g.passed) tags.insert(r.tag);
    out.outcomes.push_back(std::move(g));
  }
  for (CaseTag t : supported_tags())
    if (!tags.count(tag_name(t))) out.missing_tags.push_back(tag_name(t));
  return out;
}

}  // namespace morrey
