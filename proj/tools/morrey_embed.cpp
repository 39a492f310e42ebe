// SPDX-License-Identifier: Apache-2.0
//
// morrey-embed <command> --config <path> [--seed N] [--slack k] [--out DIR]

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "morrey/morrey.h"

namespace fs = std::filesystem;

namespace {

struct Freer {
  void operator()(char* s) const { morrey_string_free(s); }
};
using CStr = std::unique_ptr<char, Freer>;

std::string take(char* s) {
  const CStr owned(s);
  return s ? std::string(s) : std::string();
}

// write then rename so readers never see half a report
void write_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
  }
  fs::rename(tmp, path);
}

struct Flags {
  std::string config;
  std::string out = "morrey-out";
  std::optional<std::uint64_t> seed;
  double slack = 0.0;
  unsigned workers = 0;
  bool omit_timing = false;
  bool quiet = false;
};

int run(const std::string& command, const Flags& f) {
  morrey_config* raw = nullptr;
  if (morrey_config_load(f.config.c_str(), &raw) != MORREY_OK) {
    std::cerr << "morrey-embed: " << morrey_last_error() << "\n";
    return 1;
  }
  std::unique_ptr<morrey_config, void (*)(morrey_config*)> cfg(raw, morrey_config_free);

  morrey_run_options o = morrey_default_options();
  if (command == "classify") o.task = MORREY_TASK_CLASSIFY;
  if (command == "evaluate") o.task = MORREY_TASK_EVALUATE;
  if (command == "oracle") o.task = MORREY_TASK_ORACLE;
  if (command == "verify") o.task = MORREY_TASK_VERIFY;
  if (command == "complementary") o.task = MORREY_TASK_COMPLEMENTARY;
  if (f.seed) {
    o.has_seed = 1;
    o.seed = *f.seed;
  }
  o.slack = f.slack;
  o.workers = f.workers;

  morrey_batch* braw = nullptr;
  if (morrey_run_all(cfg.get(), &o, &braw) != MORREY_OK) {
    std::cerr << "morrey-embed: " << morrey_last_error() << "\n";
    return 1;
  }
  std::unique_ptr<morrey_batch, void (*)(morrey_batch*)> batch(braw, morrey_batch_free);

  fs::create_directories(f.out);
  std::string summary = std::string(morrey_summary_header()) + "\n";
  int code = 0;
  for (std::size_t i = 0; i < morrey_batch_count(batch.get()); ++i) {
    const morrey_report* r = morrey_batch_report(batch.get(), i);
    char *name = nullptr, *tag = nullptr, *json = nullptr, *row = nullptr;
    morrey_report_name(r, &name);
    morrey_report_tag(r, &tag);
    morrey_report_json(r, &json);
    morrey_report_summary_row(r, f.omit_timing ? 1 : 0, &row);
    const std::string sname = take(name), stag = take(tag), sjson = take(json), srow = take(row);
    write_atomic(fs::path(f.out) / (sname + ".json"), sjson + "\n");
    summary += srow + "\n";
    const int c = morrey_report_exit_code(r);
    code = std::max(code, c);
    if (!f.quiet) {
      if (command == "classify") {
        std::cout << sname << ": " << stag << "\n";
      } else {
        std::cout << srow << "\n";
      }
    }
  }
  write_atomic(fs::path(f.out) / "summary.csv", summary);

  if (command == "golden") {
    int passed = 0;
    char* text = nullptr;
    if (morrey_batch_golden(batch.get(), &passed, &text) != MORREY_OK) {
      std::cerr << "morrey-embed: " << morrey_last_error() << "\n";
      return 1;
    }
    std::cout << take(text);
    std::cout << (passed ? "golden suite: PASS\n" : "golden suite: FAIL\n");
    return passed ? 0 : 3;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embeddings between weighted local Morrey-type spaces: functionals, oracle, verdicts"};
  app.require_subcommand(1);
  Flags f;
  const char* commands[][2] = {
      {"classify", "print the theorem case of each scenario"},
      {"evaluate", "evaluate the characterizing functionals"},
      {"oracle", "brute-force lower bounds for the embedding norm"},
      {"verify", "functionals, oracle and the equivalence verdict"},
      {"complementary", "rewrite complementary-space scenarios and verify them"},
      {"golden", "run the bundled corpus against stored baselines"},
  };
  for (auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    auto* cfg = sub->add_option("--config", f.config, "scenario config file");
    if (std::string(c[0]) == "golden") {
      f.config = MORREY_GOLDEN_CONFIG;
    } else {
      cfg->required();
    }
    sub->add_option("--seed", f.seed, "override every scenario's seed");
    sub->add_option("--slack", f.slack, "override the slack factor (> 1)")->check(CLI::PositiveNumber);
    sub->add_option("--out", f.out, "report directory")->capture_default_str();
    sub->add_option("--workers", f.workers, "worker threads, 0 = all cores");
    sub->add_flag("--omit-timing", f.omit_timing, "leave the seconds column empty for byte-stable summaries");
    sub->add_flag("-q,--quiet", f.quiet, "no per-scenario output");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (f.slack != 0.0 && !(f.slack > 1.0)) {
    std::cerr << "morrey-embed: --slack must exceed 1\n";
    return 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, f);
  } catch (const std::exception& e) {
    std::cerr << "morrey-embed: " << e.what() << "\n";
    return 1;
  }
}
