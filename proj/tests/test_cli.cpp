#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nfc/cli.hpp"

using namespace nfc;
using namespace nfc::cli;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::vector<const char*> argv{"nfc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli((int)argv.size(), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = "/tmp/nfc_test_" + name;
  std::ofstream f(path);
  f << text;
  return path;
}

}  // namespace

TEST_CASE("validate passes on defaults and fails with the failing index") {
  auto ok = run({"validate"});
  CHECK(ok.code == kExitPass);
  CHECK(ok.out.find("growth_lk,2,true") != std::string::npos);

  auto path = write_temp("bad_l.json",
                         R"({"n_seq":[3,8,15,24,35],"l_seq":[1,2,3]})");
  auto bad = run({"--config", path, "validate"});
  CHECK(bad.code == kExitBoundFailure);
  CHECK(bad.out.find("growth_lk,1,false") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("config parse errors carry location info and exit 3") {
  auto path = write_temp("broken.json", "{\"n_seq\": [3,");
  auto r = run({"--config", path, "validate"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("parse error") != std::string::npos);
  std::remove(path.c_str());

  auto half = write_temp("half.json", R"({"l_seq":[1,2,8,44]})");
  auto r2 = run({"--config", half, "validate"});
  CHECK(r2.code == kExitUsage);
  CHECK(r2.err.find("n_seq") != std::string::npos);
  std::remove(half.c_str());

  auto missing = run({"--config", "/tmp/nfc_no_such_file.json", "validate"});
  CHECK(missing.code == kExitUsage);
}

TEST_CASE("heights table carries the frozen values and growth flags") {
  auto r = run({"heights", "--trunc", "9"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("4,241,false,0,241/81,2.975308641975,true") !=
        std::string::npos);
  CHECK(r.out.find("9,78244") != std::string::npos);
  CHECK(r.out.find("0,1,false") != std::string::npos);  // h_0 = 1 row
}

TEST_CASE("crossings command reproduces the hand-traced instance") {
  auto r = run({"crossings", "--trunc", "4", "--d", "2", "--points", "idx:10",
                "--points", "idx:90", "--level", "3", "--window", "-10..35"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("-10,29,40,1 2,true,false,false") != std::string::npos);
}

TEST_CASE("csv and json renderings carry identical fields") {
  auto csv = run({"crossings", "--trunc", "4", "--d", "2", "--points",
                  "idx:10", "--points", "idx:90", "--level", "3", "--window",
                  "-10..35"});
  auto json = run({"crossings", "--trunc", "4", "--d", "2", "--points",
                   "idx:10", "--points", "idx:90", "--level", "3", "--window",
                   "-10..35", "--output", "json"});
  std::istringstream head(csv.out);
  std::string cols;
  std::getline(head, cols);
  std::istringstream colstream(cols);
  std::string col;
  while (std::getline(colstream, col, ','))
    CHECK(json.out.find("\"" + col + "\"") != std::string::npos);
  CHECK(json.out.find("\"tool\": \"nfc 0.1.0\"") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical reports") {
  std::vector<std::string> args{"report", "crossing-stats", "--trunc",
                                "9",      "--seed",          "31"};
  auto a = run(args);
  auto b = run(args);
  CHECK(a.out == b.out);
  CHECK(a.code == b.code);
}

TEST_CASE("exit codes distinguish bound failure from unmet hypothesis") {
  // desk-scale theta1: ratios pass, smallness hypotheses fail -> 2
  auto t = run({"report", "theta1", "--trunc", "9", "--level", "5"});
  CHECK(t.code == kExitHypothesis);
  CHECK(t.out.find("failures=0") != std::string::npos);
  // synthetic hierarchy: hypotheses hold, bounds hold -> 0
  auto h = run({"report", "hierarchy"});
  CHECK(h.code == kExitPass);
  // usage errors -> 3
  auto u = run({"report", "no-such-report"});
  CHECK(u.code == kExitUsage);
  auto w = run({"orbit", "--window", "oops"});
  CHECK(w.code == kExitUsage);
}

TEST_CASE("decompose prints the level chain") {
  auto r = run({"decompose", "165", "--trunc", "4"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("3,child,4,3") != std::string::npos);
  CHECK(r.out.find("0,child,0,1") != std::string::npos);
  auto s = run({"decompose", "50", "--trunc", "4"});
  CHECK(s.out.find("3,spacer,,,after1,10") != std::string::npos);
}

TEST_CASE("twist example scenario passes end to end") {
  auto r = run({"report", "twist-example", "--trunc", "9", "--d", "2"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("true") != std::string::npos);
}

TEST_CASE("ratergo report stays within the proof bound") {
  auto r = run({"report", "ratergo", "--trunc", "9"});
  CHECK(r.code == kExitPass);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    CHECK(line.find(",true") != std::string::npos);  // bound_ok column
    ++rows;
  }
  CHECK(rows == 5);
}
