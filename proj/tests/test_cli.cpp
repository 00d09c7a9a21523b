#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "nleg/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the installed CLI with stdout captured to a scratch file.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string capture = "cli_capture_" + std::to_string(counter++) + ".txt";
  const std::string cmd = std::string(NLEG_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
#ifdef _WIN32
  r.code = status;
#else
  r.code = WEXITSTATUS(status);
#endif
  std::ifstream in(capture, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(capture.c_str());
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_count(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n' ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("catalog lists and describes algebras") {
  const RunResult all = run_cli("catalog");
  CHECK(all.code == 0);
  CHECK(all.out.find("su2: dim 3, semisimple, killing signature (0,3,0)") != std::string::npos);
  CHECK(all.out.find("sl2r") != std::string::npos);

  const RunResult one = run_cli("catalog su2");
  CHECK(one.code == 0);
  CHECK(line_count(one.out) == 1);

  const RunResult bad = run_cli("catalog nosuch");
  CHECK(bad.code == 2);
}

TEST_CASE("verify theorem1 passes and writes reports") {
  const RunResult r = run_cli("verify theorem1 --algebra su2 --lambda 1 --out cli_t1");
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  const std::string report = slurp("cli_t1.json");
  CHECK(report.find("\"verdict\": \"pass\"") != std::string::npos);
  CHECK(fs::exists("cli_t1.csv"));
  fs::remove("cli_t1.json");
  fs::remove("cli_t1.csv");
}

TEST_CASE("verify theorem2 records the sl2r signature") {
  const RunResult r = run_cli("verify theorem2 --algebra sl2r --rho exp --out cli_t2");
  CHECK(r.code == 0);
  const nleg::json report = nleg::json::parse(slurp("cli_t2.json"));
  CHECK(report["verdict"] == "pass");
  for (const auto& p : report["points"]) {
    CHECK(p["signature"][0] == 3);
    CHECK(p["signature"][1] == 1);
    CHECK(p["signature"][2] == 0);
  }
  fs::remove("cli_t2.json");
  fs::remove("cli_t2.csv");
}

TEST_CASE("verify rejects non-semisimple algebras with exit 2") {
  const RunResult r = run_cli("verify theorem1 --algebra heisenberg3 --out cli_bad");
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists("cli_bad.json"));
}

TEST_CASE("verification failure exits 1") {
  // lambda = 0 degenerates the model at the vacuum: flagged, not passed
  const RunResult r = run_cli("verify theorem1 --algebra su2 --lambda 0 --mu 1 --out cli_fail");
  CHECK(r.code == 1);
  const std::string report = slurp("cli_fail.json");
  CHECK(report.find("\"verdict\": \"fail\"") != std::string::npos);
  fs::remove("cli_fail.json");
  fs::remove("cli_fail.csv");
}

TEST_CASE("reports are bit-identical for identical config and seed") {
  CHECK(run_cli("verify theorem1 --algebra sl2r --seed 7 --out cli_d1").code == 0);
  CHECK(run_cli("verify theorem1 --algebra sl2r --seed 7 --out cli_d2").code == 0);
  CHECK(slurp("cli_d1.json") == slurp("cli_d2.json"));
  CHECK(slurp("cli_d1.csv") == slurp("cli_d2.csv"));

  // a different seed must actually change the sampled points
  CHECK(run_cli("verify theorem1 --algebra sl2r --seed 8 --out cli_d3").code == 0);
  CHECK(slurp("cli_d1.json") != slurp("cli_d3.json"));
  for (const char* f : {"cli_d1", "cli_d2", "cli_d3"}) {
    fs::remove(std::string(f) + ".json");
    fs::remove(std::string(f) + ".csv");
  }
}

TEST_CASE("config file merges under explicit flags") {
  {
    std::ofstream cfg("cli_cfg.json");
    cfg << R"({"algebra": "heisenberg3", "points": 25})";
  }
  // flag overrides the file's algebra; the file's point count survives
  const RunResult r =
      run_cli("verify theorem1 --config cli_cfg.json --algebra su2 --out cli_cfgrun");
  CHECK(r.code == 0);
  const std::string report = slurp("cli_cfgrun.json");
  CHECK(report.find("\"points_requested\": 25") != std::string::npos);
  CHECK(report.find("\"algebra\": \"su2\"") != std::string::npos);
  fs::remove("cli_cfg.json");
  fs::remove("cli_cfgrun.json");
  fs::remove("cli_cfgrun.csv");
}

TEST_CASE("unknown config keys are rejected") {
  {
    std::ofstream cfg("cli_badcfg.json");
    cfg << R"({"algebra": "su2", "tolerance": 1e-6})";
  }
  const RunResult r = run_cli("verify theorem1 --config cli_badcfg.json --out cli_badrun");
  CHECK(r.code == 2);
  CHECK(r.out.find("unknown key") != std::string::npos);
  fs::remove("cli_badcfg.json");
}

TEST_CASE("too few points for a verdict is a config error") {
  const RunResult r = run_cli("verify theorem1 --algebra su2 --points 10 --out cli_few");
  CHECK(r.code == 2);
}

TEST_CASE("unknown flags and missing subcommands exit 2") {
  CHECK(run_cli("verify theorem1 --nonsense 3").code == 2);
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
}

TEST_CASE("invariants: su2 J3 column vanishes, row count matches") {
  const RunResult r = run_cli("invariants --algebra su2 --points 12");
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "index,x0,x1,x2,j1,j2,j3,density,sig_plus,sig_minus,sig_zero");
  int rows = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++rows;
    // j3 is the 7th comma-separated column
    std::istringstream cells(line);
    std::string cell;
    for (int c = 0; c < 7; ++c) std::getline(cells, cell, ',');
    CHECK(std::abs(std::stod(cell)) < 1e-9);
  }
  CHECK(rows == 12);
}

TEST_CASE("invariants on an abelian algebra are identically zero") {
  const RunResult r = run_cli("invariants --algebra 'abelian(3)' --points 5");
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    for (int c = 0; c < 8; ++c) {
      std::getline(cells, cell, ',');
      if (c >= 4) CHECK(std::abs(std::stod(cell)) < 1e-12);  // j1 j2 j3 density
    }
  }
}

TEST_CASE("profile emits a monotone table with f(0) = 0 and slope sqrt(b)") {
  const RunResult r = run_cli("profile --A 1 --b 4 --r-max 2 --steps 200");
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "r,f");
  double prev_f = -1.0;
  double first_r = 0.0, first_f = 0.0, second_r = 0.0, second_f = 0.0;
  int row = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const double rv = std::stod(line.substr(0, comma));
    const double fv = std::stod(line.substr(comma + 1));
    if (row == 0) {
      first_r = rv;
      first_f = fv;
    }
    if (row == 1) {
      second_r = rv;
      second_f = fv;
    }
    CHECK(fv > prev_f);
    prev_f = fv;
    ++row;
  }
  CHECK(row == 201);
  CHECK(first_r == 0.0);
  CHECK(first_f == 0.0);
  // near-origin slope saturates at sqrt(b) = 2
  CHECK((second_f - first_f) / (second_r - first_r) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("profile rejects bad parameters") {
  CHECK(run_cli("profile --A -1").code == 2);
  CHECK(run_cli("profile --steps 0").code == 2);
}
