// SPDX-License-Identifier: Apache-2.0

#include "morrey/morrey.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>

#include "scenario.hpp"

struct morrey_config {
  std::vector<morrey::Scenario> scenarios;
};
struct morrey_report {
  morrey::Report report;
};
struct morrey_batch {
  std::vector<morrey_report> reports;
};
struct morrey_weight {
  morrey::WeightExpr w;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
morrey_status guarded(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const morrey::ParseError& e) {
    last_error = e.what();
    return MORREY_E_PARSE;
  } catch (const morrey::ConfigError& e) {
    last_error = e.what();
    return MORREY_E_PARSE;
  } catch (const morrey::UnsupportedError& e) {
    last_error = e.what();
    return MORREY_E_UNSUPPORTED;
  } catch (const morrey::DegenerateError& e) {
    last_error = e.what();
    return MORREY_E_DEGENERATE;
  } catch (const morrey::Error& e) {
    last_error = e.what();
    return MORREY_E_DOMAIN;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MORREY_E_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return MORREY_E_INTERNAL;
  }
}

morrey_status bad_arg(const char* what) {
  last_error = what;
  return MORREY_E_ARGUMENT;
}

morrey::RunOptions to_options(const morrey_run_options* o) {
  morrey::RunOptions r;
  if (!o) return r;
  if (o->task >= MORREY_TASK_CLASSIFY && o->task <= MORREY_TASK_COMPLEMENTARY)
    r.task = static_cast<morrey::Task>(o->task);
  else if (o->task != MORREY_TASK_DEFAULT)
    throw morrey::DomainError("unknown task code");
  if (o->has_seed) r.seed = o->seed;
  if (o->slack > 0) r.slack = o->slack;
  return r;
}

}  // namespace

extern "C" {

const char* morrey_version(void) { return "0.1.0"; }

const char* morrey_last_error(void) { return last_error.c_str(); }

void morrey_string_free(char* s) { std::free(s); }

morrey_run_options morrey_default_options(void) { return {MORREY_TASK_DEFAULT, 0, 0, 0.0, 0}; }

morrey_status morrey_classify(double p1, double p2, double q1, double q2, char** tag) {
  if (!tag) return bad_arg("tag is null");
  return guarded([&] {
    *tag = dup(morrey::classify(morrey::ExponentQuad::make(p1, p2, q1, q2)).name());
    return MORREY_OK;
  });
}

morrey_status morrey_weight_parse(const char* text, morrey_weight** out) {
  if (!text || !out) return bad_arg("null argument");
  return guarded([&] {
    *out = new morrey_weight{morrey::parse_weight(text)};
    return MORREY_OK;
  });
}

morrey_status morrey_weight_eval(const morrey_weight* w, double t, double* out) {
  if (!w || !out) return bad_arg("null argument");
  return guarded([&] {
    if (!(t > 0)) throw morrey::DomainError("weights are defined for t > 0");
    *out = w->w.eval(t);
    return MORREY_OK;
  });
}

morrey_status morrey_weight_integrate(const morrey_weight* w, double r, double a, double b, double* out,
                                      double* abs_error) {
  if (!w || !out) return bad_arg("null argument");
  return guarded([&] {
    const morrey::QuadResult q = morrey::integrate_weighted(w->w, r, a, b);
    *out = q.value;
    if (abs_error) *abs_error = q.abs_error;
    return MORREY_OK;
  });
}

void morrey_weight_free(morrey_weight* w) { delete w; }

morrey_status morrey_config_parse(const char* text, morrey_config** out) {
  if (!text || !out) return bad_arg("null argument");
  return guarded([&] {
    *out = new morrey_config{morrey::parse_config(text)};
    return MORREY_OK;
  });
}

morrey_status morrey_config_load(const char* path, morrey_config** out) {
  if (!path || !out) return bad_arg("null argument");
  return guarded([&] {
    *out = new morrey_config{morrey::load_config(path)};
    return MORREY_OK;
  });
}

size_t morrey_config_count(const morrey_config* c) { return c ? c->scenarios.size() : 0; }

morrey_status morrey_config_name(const morrey_config* c, size_t index, char** name) {
  if (!c || !name) return bad_arg("null argument");
  if (index >= c->scenarios.size()) return bad_arg("scenario index out of range");
  return guarded([&] {
    *name = dup(c->scenarios[index].name);
    return MORREY_OK;
  });
}

void morrey_config_free(morrey_config* c) { delete c; }

morrey_status morrey_run(const morrey_config* c, size_t index, const morrey_run_options* opts, morrey_report** out) {
  if (!c || !out) return bad_arg("null argument");
  if (index >= c->scenarios.size()) return bad_arg("scenario index out of range");
  return guarded([&] {
    *out = new morrey_report{morrey::run_scenario(c->scenarios[index], to_options(opts))};
    return MORREY_OK;
  });
}

morrey_status morrey_run_all(const morrey_config* c, const morrey_run_options* opts, morrey_batch** out) {
  if (!c || !out) return bad_arg("null argument");
  return guarded([&] {
    const unsigned workers = opts ? opts->workers : 0;
    auto reports = morrey::run_all(c->scenarios, to_options(opts), workers);
    auto* b = new morrey_batch;
    for (auto& r : reports) b->reports.push_back({std::move(r)});
    *out = b;
    return MORREY_OK;
  });
}

size_t morrey_batch_count(const morrey_batch* b) { return b ? b->reports.size() : 0; }

const morrey_report* morrey_batch_report(const morrey_batch* b, size_t index) {
  if (!b || index >= b->reports.size()) return nullptr;
  return &b->reports[index];
}

morrey_status morrey_batch_golden(const morrey_batch* b, int* passed, char** text) {
  if (!b || !passed) return bad_arg("null argument");
  return guarded([&] {
    std::vector<morrey::Report> rs;
    for (const auto& r : b->reports) rs.push_back(r.report);
    const morrey::GoldenSummary g = morrey::compare_golden(rs);
    std::ostringstream o;
    for (const auto& x : g.outcomes) {
      o << (x.passed ? "ok   " : "FAIL ") << x.scenario;
      for (const auto& d : x.deviations) o << "\n       " << d;
      o << "\n";
    }
    for (const auto& t : g.missing_tags) o << "FAIL coverage: no passing scenario for tag " << t << "\n";
    *passed = g.passed() ? 1 : 0;
    if (text) *text = dup(o.str());
    return MORREY_OK;
  });
}

void morrey_batch_free(morrey_batch* b) { delete b; }

int morrey_report_exit_code(const morrey_report* r) { return r ? r->report.exit_code() : 1; }

morrey_status morrey_report_tag(const morrey_report* r, char** tag) {
  if (!r || !tag) return bad_arg("null argument");
  return guarded([&] {
    *tag = dup(r->report.tag);
    return MORREY_OK;
  });
}

morrey_status morrey_report_name(const morrey_report* r, char** name) {
  if (!r || !name) return bad_arg("null argument");
  return guarded([&] {
    *name = dup(r->report.scenario.name);
    return MORREY_OK;
  });
}

morrey_status morrey_report_values(const morrey_report* r, double* i_total, double* oracle_l, double* ratio) {
  if (!r) return bad_arg("null argument");
  const double nan = std::nan("");
  const auto& rep = r->report;
  if (i_total) *i_total = rep.functional ? rep.functional->value : nan;
  if (oracle_l) *oracle_l = rep.oracle && rep.oracle->defined ? rep.oracle->lower_bound : nan;
  if (ratio) *ratio = rep.verdict ? rep.verdict->ratio : nan;
  last_error.clear();
  return MORREY_OK;
}

morrey_status morrey_report_json(const morrey_report* r, char** json) {
  if (!r || !json) return bad_arg("null argument");
  return guarded([&] {
    *json = dup(r->report.to_json().dump(2));
    return MORREY_OK;
  });
}

morrey_status morrey_report_summary_row(const morrey_report* r, int omit_timing, char** row) {
  if (!r || !row) return bad_arg("null argument");
  return guarded([&] {
    *row = dup(morrey::summary_row(r->report, omit_timing != 0));
    return MORREY_OK;
  });
}

const char* morrey_summary_header(void) {
  static const std::string h = morrey::summary_header();
  return h.c_str();
}

void morrey_report_free(morrey_report* r) { delete r; }

}  // extern "C"
