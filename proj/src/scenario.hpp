// SPDX-License-Identifier: Apache-2.0
//
// Scenario configs, the classify/evaluate/oracle/verify/complementary
// pipelines and their reports.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "functionals.hpp"
#include "oracle.hpp"

namespace morrey {

/// Malformed scenario config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Task { classify, evaluate, oracle, verify, complementary };

std::string task_name(Task t);
Task parse_task(std::string_view s);

struct Scenario {
  std::string name;
  std::string description;
  int dim = 1;
  double p1 = 0, p2 = 0, q1 = 0, q2 = 0;
  // weight grammar text; angular is a constant or a bracketed value list
  std::string v1 = "1", v2 = "1", w1, w2;
  std::string a1 = "1", a2 = "1";
  Task task = Task::verify;
  FunctionalSettings settings;
  SearchConfig search;
  // golden expectations
  std::optional<std::string> expect_tag;
  std::optional<std::string> expect_verdict;
  std::optional<double> baseline_i;
  std::optional<double> baseline_l;
  double baseline_tol = 1e-6;

  ExponentQuad exponents() const { return ExponentQuad::make(p1, p2, q1, q2); }
  /// Round-trips through parse_config.
  std::string to_config() const;
};

/// INI-style text: [defaults] and [scenario NAME] sections, key = value,
/// '#' comments. Sections are order-independent; unknown keys throw.
std::vector<Scenario> parse_config(std::string_view text);
std::vector<Scenario> load_config(const std::string& path);

AngularWeight parse_angular(std::string_view text, int dim);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> slack;
  std::optional<Task> task;  // overrides the scenario's own
};

struct Report {
  Scenario scenario;
  Task task = Task::verify;
  std::string tag;
  bool supported = false;
  std::optional<Admissibility> admissibility;
  std::optional<FunctionalValue> functional;
  std::optional<SearchResult> oracle;
  std::optional<Verdict> verdict;
  std::optional<Scenario> transformed;  // complementary rewrite
  double seconds = 0.0;
  std::string error;  // config or domain error

  /// 0 ok, 1 config error, 2 admissibility failure, 3 verify FAIL
  int exit_code() const;
  nlohmann::json to_json() const;
};

/// The complementary scenario rewritten as an ordinary one.
Scenario complementary_scenario(const Scenario& s);

Report run_scenario(const Scenario& s, const RunOptions& opts = {});
/// Runs on a worker pool; results keep the input order.
std::vector<Report> run_all(const std::vector<Scenario>& ss, const RunOptions& opts = {}, unsigned workers = 0);

/// scenario,tag,I_total,components,oracle_L,ratio,verdict,seconds
std::string summary_header();
std::string summary_row(const Report& r, bool omit_timing);

struct GoldenOutcome {
  std::string scenario;
  bool passed = true;
  std::vector<std::string> deviations;
};

struct GoldenSummary {
  std::vector<GoldenOutcome> outcomes;
  std::vector<std::string> missing_tags;  // supported tags with no scenario
  bool passed() const;
};

GoldenSummary compare_golden(const std::vector<Report>& reports);

}  // namespace morrey
