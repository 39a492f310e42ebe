// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared library through its C header only.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "morrey/morrey.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  morrey_string_free(s);
  return out;
}

const char* kConfig =
    "[scenario anchor]\n"
    "p1 = 1\np2 = 1\nq1 = 1\nq2 = 2\n"
    "w1 = (1+t)^-2\nw2 = (1+t)^-2\n"
    "knots = 24\nrestarts = 1\n"
    "[scenario tail]\n"
    "task = evaluate\n"
    "p1 = 1\np2 = 1\nq1 = 1\nq2 = 2\n"
    "w1 = (1+t)^-2\nw2 = 1\n";

}  // namespace

TEST_CASE("classification through the C interface") {
  char* tag = nullptr;
  REQUIRE(morrey_classify(2, 1, 1, 2, &tag) == MORREY_OK);
  CHECK(take(tag) == "A_i");
  REQUIRE(morrey_classify(1, 2, 1, 3, &tag) == MORREY_OK);
  CHECK(take(tag) == "Unsupported(p2>p1)");
  CHECK(morrey_classify(-1, 1, 1, 1, &tag) == MORREY_E_DOMAIN);
  CHECK(std::strlen(morrey_last_error()) > 0);
  CHECK(morrey_classify(1, 1, 1, 1, nullptr) == MORREY_E_ARGUMENT);
}

TEST_CASE("weight handles") {
  morrey_weight* w = nullptr;
  REQUIRE(morrey_weight_parse("(1+t)^-2", &w) == MORREY_OK);
  double x = 0, err = 0;
  REQUIRE(morrey_weight_eval(w, 1.0, &x) == MORREY_OK);
  CHECK(x == doctest::Approx(0.25));
  CHECK(morrey_weight_eval(w, 0.0, &x) == MORREY_E_DOMAIN);
  REQUIRE(morrey_weight_integrate(w, 1.0, 0.0, INFINITY, &x, &err) == MORREY_OK);
  CHECK(std::abs(x - 1.0) <= 1e-9);
  morrey_weight_free(w);

  morrey_weight* h = nullptr;
  REQUIRE(morrey_weight_parse("t^-1", &h) == MORREY_OK);
  REQUIRE(morrey_weight_integrate(h, 1.0, 1.0, INFINITY, &x, nullptr) == MORREY_OK);
  CHECK(std::isinf(x));
  morrey_weight_free(h);

  CHECK(morrey_weight_parse("t^", &w) == MORREY_E_PARSE);
  CHECK(std::string(morrey_last_error()).find("offset 2") != std::string::npos);
}

TEST_CASE("config, run and report accessors") {
  morrey_config* c = nullptr;
  REQUIRE(morrey_config_parse(kConfig, &c) == MORREY_OK);
  REQUIRE(morrey_config_count(c) == 2);
  char* name = nullptr;
  REQUIRE(morrey_config_name(c, 1, &name) == MORREY_OK);
  CHECK(take(name) == "tail");
  CHECK(morrey_config_name(c, 5, &name) == MORREY_E_ARGUMENT);

  morrey_report* r = nullptr;
  REQUIRE(morrey_run(c, 0, nullptr, &r) == MORREY_OK);
  CHECK(morrey_report_exit_code(r) == 0);
  double i = 0, l = 0, ratio = 0;
  REQUIRE(morrey_report_values(r, &i, &l, &ratio) == MORREY_OK);
  CHECK(i == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-6));
  CHECK(l > i / 10);
  CHECK(l < i * 10);
  char* json = nullptr;
  REQUIRE(morrey_report_json(r, &json) == MORREY_OK);
  const std::string js = take(json);
  CHECK(js.find("\"verdict\": \"PASS\"") != std::string::npos);
  char* row = nullptr;
  REQUIRE(morrey_report_summary_row(r, 1, &row) == MORREY_OK);
  CHECK(take(row).rfind("anchor,C,", 0) == 0);
  morrey_report_free(r);

  REQUIRE(morrey_run(c, 1, nullptr, &r) == MORREY_OK);
  CHECK(morrey_report_exit_code(r) == 2);
  REQUIRE(morrey_report_values(r, &i, &l, &ratio) == MORREY_OK);
  CHECK(std::isnan(i));
  morrey_report_free(r);

  morrey_run_options o = morrey_default_options();
  o.task = MORREY_TASK_CLASSIFY;
  o.workers = 2;
  morrey_batch* b = nullptr;
  REQUIRE(morrey_run_all(c, &o, &b) == MORREY_OK);
  REQUIRE(morrey_batch_count(b) == 2);
  char* tag = nullptr;
  REQUIRE(morrey_report_tag(morrey_batch_report(b, 0), &tag) == MORREY_OK);
  CHECK(take(tag) == "C");
  CHECK(morrey_batch_report(b, 9) == nullptr);
  int passed = 1;
  char* text = nullptr;
  REQUIRE(morrey_batch_golden(b, &passed, &text) == MORREY_OK);
  CHECK(passed == 0);  // coverage of the other tags is missing
  CHECK(take(text).find("coverage") != std::string::npos);
  morrey_batch_free(b);

  o.task = 17;
  CHECK(morrey_run(c, 0, &o, &r) == MORREY_E_DOMAIN);
  morrey_config_free(c);
}

TEST_CASE("config errors") {
  morrey_config* c = nullptr;
  CHECK(morrey_config_parse("[scenario a]\nbogus = 1\n", &c) == MORREY_E_PARSE);
  CHECK(std::string(morrey_last_error()).find("bogus") != std::string::npos);
  CHECK(morrey_config_load("/nonexistent.cfg", &c) == MORREY_E_PARSE);
  CHECK(morrey_config_parse(nullptr, &c) == MORREY_E_ARGUMENT);
  CHECK(std::string(morrey_summary_header()).rfind("scenario,tag,", 0) == 0);
  CHECK(std::string(morrey_version()).size() > 0);
}
