#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "gruenwald/errors.hpp"
#include "gruenwald/format.hpp"
#include "gruenwald/grid.hpp"
#include "gruenwald/harness.hpp"

using namespace gruenwald;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GRUENWALD_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("gruenwald_test_" + name); }

}  // namespace

TEST_CASE("grid parsing and points") {
  const GridSpec g = GridSpec::parse("-5:5:1/97");
  CHECK(g.min == -5.0);
  CHECK(g.step == 1.0 / 97.0);
  const auto pts = g.points();
  CHECK(pts.size() == 971);
  CHECK(pts[485] == 0.0);
  CHECK(pts.back() == doctest::Approx(5.0));
  CHECK_THROWS_AS(GridSpec::parse("1:0:0.1"), DomainError);
  CHECK_THROWS_AS(GridSpec::parse("0:1"), DomainError);
  CHECK_THROWS_AS(GridSpec::parse("0:1:-1"), DomainError);
  CHECK(GridSpec::parse(g.to_string()).step == g.step);
}

TEST_CASE("doubles are written with 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(-2.5e-300)) == -2.5e-300);
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("experiment config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.tau_ladder = {8.0, 4.0};
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.nu = -1.5;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.target = "nope";
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.experiment = "theorem3";
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("target catalog") {
  const Order order(0.0);
  for (const auto& id : target_catalog()) {
    if (id == "custom-samples") continue;
    const TargetFunction t = make_target(id, order);
    CHECK(t.name == id);
    CHECK(std::isfinite(t(0.5)));
  }
  CHECK(make_target("recip-weight", order)(4.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(make_target("custom-samples", order), DomainError);
}

TEST_CASE("custom samples interpolate and refuse to extrapolate") {
  const fs::path p = scratch("samples.csv");
  {
    std::ofstream out(p);
    out << "x,value\n-1,0\n0,2\n1,4\n";
  }
  const TargetFunction t = make_target("custom-samples", Order(0.0), p.string());
  CHECK(t(0.5) == doctest::Approx(3.0));
  CHECK(t(-1.0) == 0.0);
  CHECK_THROWS_AS(t(1.5), MissingSampleError);
  fs::remove(p);
}

TEST_CASE("unweighted-limit error persists for 1/w") {
  ExperimentConfig c;
  c.experiment = "remark1";
  c.target = "recip-weight";
  c.tau_ladder = {4.0, 256.0};
  const ConvergenceReport r = run_convergence(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].sup_error == doctest::Approx(1.0));
  CHECK(r.rows[1].sup_error == doctest::Approx(1.0));
  CHECK(all_pass(evaluate_verdicts(r)));
}

TEST_CASE("verdicts are recomputable from the json rows") {
  ExperimentConfig c;
  c.nu = 0.7;
  c.tau_ladder = {4.0, 8.0};
  const ConvergenceReport r = run_convergence(c);
  std::ostringstream os;
  write_json(os, r);
  const auto doc = nlohmann::json::parse(os.str());
  CHECK(doc["schema"] == 1);
  const auto& rows = doc["rows"];
  REQUIRE(rows.size() == 2);
  const bool decreasing = rows[1]["sup_error"].get<double>() < rows[0]["sup_error"].get<double>();
  const bool below = rows[1]["sup_error"].get<double>() < c.final_threshold;
  CHECK(doc["verdicts"][0]["pass"].get<bool>() == decreasing);
  CHECK(doc["verdicts"][1]["pass"].get<bool>() == below);
}

TEST_CASE("csv layout") {
  ExperimentConfig c;
  c.nu = 0.7;
  c.tau_ladder = {4.0};
  std::ostringstream os;
  write_csv(os, run_convergence(c));
  const std::string s = os.str();
  CHECK(s.rfind("nu,tau,grid_min,grid_max,grid_step,sup_error,argmax,tail_tolerance,nodes_used\n", 0) == 0);
  CHECK(s.find(",4,-5,5,") != std::string::npos);
}

TEST_CASE("hypothesis failures fail the report") {
  ExperimentConfig c;
  c.nu = 0.7;
  c.tau_ladder = {4.0, 8.0};
  c.grid = {-2.0, 2.0, 0.05};
  ConvergenceReport r = run_convergence(c);
  CHECK(r.failures.empty());
  r.failures.push_back("sandwich violated");
  const auto v = evaluate_verdicts(r);
  CHECK_FALSE(all_pass(v));
  CHECK(v.front().rule == "hypotheses");
  CHECK(v.front().detail == "sandwich violated");
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("zeros --nu 0 --count 3").status == 0);
  CHECK(run_cli("zeros --nu -2 --count 3").status == 2);
  CHECK(run_cli("zeros --count 3").status == 2);
  CHECK(run_cli("bogus").status == 2);
  CHECK(run_cli("converge --grid 1:0:0.1").status == 2);
  CHECK(run_cli("converge --nu 0.7 --tau-ladder 4,8 --grid -2:2:0.05").status == 1);
  CHECK(run_cli("converge --experiment remark1 --target recip-weight --tau-ladder 4,16 --grid -2:2:0.05").status == 0);
  CHECK(run_cli("probe dilation-failure").status == 0);
}

TEST_CASE("cli zeros output") {
  const RunResult r = run_cli("zeros --nu 0 --count 2");
  CHECK(r.out.rfind("index,zero,deriv,second_deriv\n1,2.404825557695772", 0) == 0);
}

TEST_CASE("cli converge is deterministic") {
  const std::string args = "converge --nu 0.7 --tau-ladder 4,8 --grid -3:3:0.05";
  const RunResult a = run_cli(args + " --format csv");
  const RunResult b = run_cli(args + " --format csv");
  CHECK_FALSE(a.out.empty());
  CHECK(a.out == b.out);
  const fs::path p = scratch("converge.json");
  CHECK(run_cli(args + " --format json --out " + p.string()).status == 1);
  std::ifstream in(p);
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc["schema"] == 1);
  CHECK(doc["rows"].size() == 2);
  fs::remove(p);
}

TEST_CASE("cli eval") {
  const RunResult r = run_cli("eval --nu 0 --tau 4 --x 0.5");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("nu,tau,x,value,target,tail_estimate,nodes_used\n0,4,0.5,", 0) == 0);
}
