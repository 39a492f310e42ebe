// SPDX-License-Identifier: Apache-2.0
//
// Runs the morrey-embed executable and checks exit codes and outputs.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("morrey-cli-test-" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(MORREY_CLI) + " " + args + " > " + (scratch() / "stdout.txt").string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kAnchor =
    "[scenario anchor]\np1 = 1\np2 = 1\nq1 = 1\nq2 = 2\nw1 = (1+t)^-2\nw2 = (1+t)^-2\nknots = 24\nrestarts = 1\n";

}  // namespace

TEST_CASE("verify on the anchor scenario") {
  const fs::path cfg = write("anchor.cfg", kAnchor);
  const fs::path out = scratch() / "verify";
  CHECK(run("verify --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "anchor.json"));
  CHECK(j["verify"]["verdict"] == "PASS");
  CHECK(j["functional"]["components"][0]["value"]["value"].get<double>() ==
        doctest::Approx(0.57735).epsilon(1e-5));
  const std::string summary = slurp(out / "summary.csv");
  CHECK(summary.rfind("scenario,tag,I_total,components,oracle_L,ratio,verdict,seconds\n", 0) == 0);
  CHECK(summary.find("anchor,C,") != std::string::npos);
}

TEST_CASE("classify on an unsupported quadruple") {
  const fs::path cfg = write("u.cfg", "[scenario u]\np1 = 1\np2 = 2\nq1 = 1\nq2 = 3\n");
  CHECK(run("classify --config " + cfg.string() + " --out " + (scratch() / "cls").string()) == 0);
  CHECK(slurp(scratch() / "stdout.txt").find("Unsupported(p2>p1)") != std::string::npos);
}

TEST_CASE("evaluate with a degenerate tail exits 2") {
  const fs::path cfg = write("d.cfg", "[scenario d]\np1 = 1\np2 = 1\nq1 = 1\nq2 = 2\nw1 = (1+t)^-2\nw2 = 1\n");
  CHECK(run("evaluate --config " + cfg.string() + " --out " + (scratch() / "ev").string()) == 2);
  CHECK(slurp(scratch() / "ev" / "d.json").find("infinite tail") != std::string::npos);
}

TEST_CASE("config errors exit 1") {
  const fs::path bad = write("bad.cfg", std::string(kAnchor) + "q5 = 3\n");
  CHECK(run("verify --config " + bad.string() + " --out " + (scratch() / "bad").string()) == 1);
  CHECK(slurp(scratch() / "stdout.txt").find("q5") != std::string::npos);
  CHECK(run("verify --config /nonexistent.cfg") == 1);
  CHECK(run("nonsense") == 1);
}

TEST_CASE("a verify FAIL exits 3") {
  const fs::path cfg = write("anchor.cfg", kAnchor);
  CHECK(run("verify --slack 1.0000001 --config " + cfg.string() + " --out " + (scratch() / "fail").string()) == 3);
}

TEST_CASE("summaries are byte identical for a fixed seed") {
  const fs::path cfg = write("two.cfg", std::string(kAnchor) +
                                            "[scenario b]\np1=2\np2=1\nq1=1\nq2=2\nw1=exp(-1*t)\nw2=exp(-1*t)\n"
                                            "knots=24\nrestarts=2\n");
  const fs::path a = scratch() / "det-a", b = scratch() / "det-b";
  CHECK(run("verify --omit-timing --seed 5 --workers 2 --config " + cfg.string() + " --out " + a.string()) == 0);
  CHECK(run("verify --omit-timing --seed 5 --workers 1 --config " + cfg.string() + " --out " + b.string()) == 0);
  const std::string sa = slurp(a / "summary.csv");
  CHECK(!sa.empty());
  CHECK(sa == slurp(b / "summary.csv"));
  CHECK(nlohmann::json::parse(slurp(a / "b.json"))["seed"] == 5);
}

TEST_CASE("complementary chains into verify") {
  const fs::path cfg = write("c.cfg",
                             "[scenario c]\np1=1\np2=1\nq1=1\nq2=2\nv1=t^-2\nv2=t^-2\nw1=(1+t)^-2\n"
                             "w2=t^1 * (1+t)^-2\nknots=24\nrestarts=1\n");
  CHECK(run("complementary --config " + cfg.string() + " --out " + (scratch() / "comp").string()) == 0);
  const auto j = nlohmann::json::parse(slurp(scratch() / "comp" / "c.json"));
  CHECK(j.contains("transformed_config"));
  CHECK(j["verify"]["verdict"] == "PASS");
}

TEST_CASE("bundled golden suite") {
  CHECK(run("golden --omit-timing -q --out " + (scratch() / "golden").string()) == 0);
  CHECK(slurp(scratch() / "stdout.txt").find("golden suite: PASS") != std::string::npos);
  fs::remove_all(scratch());
}
