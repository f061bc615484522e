#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

#include "critwave/criticality.hpp"
#include "critwave/harness.hpp"

using namespace critwave;
using namespace critwave::harness;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("critwave_unit_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

int cli(std::vector<const char*> args) {
  args.insert(args.begin(), "critwave");
  return run_cli(static_cast<int>(args.size()), args.data());
}

SimulationConfig small_config() {
  SimulationConfig c;
  c.n = 4;
  c.p = 2.0;
  c.h = 1.0 / 50.0;
  c.t_max = 2.0;
  c.initial_data.amplitude = 1.0;
  return c;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.simulation.n = 5;
  c.simulation.p = 1.7;
  c.simulation.h = 0.01;
  c.simulation.initial_data.amplitude = 3.0;
  c.checks.holder = false;
  c.sweep.amplitude = {1.0, 2.0};
  c.jobs = 2;
  const ExperimentConfig back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.simulation.n == 5);
  CHECK(back.checks.holder == false);
}

TEST_CASE("critical p and malformed input") {
  const auto c = config_from_json(nlohmann::json::parse(R"({"simulation": {"n": 3, "p": "critical"}})"));
  CHECK(c.simulation.p == doctest::Approx(critical_exponent(3)));
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"simulation": {"p": "large"}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"simulation": {"n": "four"}})")),
                  std::invalid_argument);
}

TEST_CASE("sweep expansion") {
  ExperimentConfig c;
  CHECK(expand_sweep(c).empty());
  c.sweep.n = {3, 4};
  c.sweep.p = {0.0, 0.1};
  c.sweep.p_mode = PMode::offset;
  c.sweep.amplitude = {1.0};
  const auto pts = expand_sweep(c);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].n == 3);
  CHECK(pts[0].p == doctest::Approx(critical_exponent(3)));
  CHECK(pts[3].n == 4);
  CHECK(pts[3].p == doctest::Approx(2.1));
}

TEST_CASE("sweep output does not depend on the thread count") {
  ExperimentConfig c;
  c.simulation = small_config();
  c.sweep.amplitude = {0.5, 1.0, 2.0};
  c.output_dir = scratch("jobs1").string();
  c.jobs = 1;
  const auto a = run_sweep(c, true);
  ExperimentConfig d = c;
  d.output_dir = scratch("jobs2").string();
  d.jobs = 2;
  const auto b = run_sweep(d, true);
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  CHECK(a[2].run_id == "run_002");
  CHECK(slurp(std::filesystem::path(c.output_dir) / "summary.csv") ==
        slurp(std::filesystem::path(d.output_dir) / "summary.csv"));
  for (const char* run : {"run_000", "run_001", "run_002"}) {
    CHECK(slurp(std::filesystem::path(c.output_dir) / run / "diagnostics.csv") ==
          slurp(std::filesystem::path(d.output_dir) / run / "diagnostics.csv"));
  }
}

TEST_CASE("chain on zero data and in three dimensions") {
  SimulationConfig z = small_config();
  z.initial_data.amplitude = 0.0;
  const RunReport zr = run_chain(z, {});
  CHECK(zr.passed());
  CHECK(zr.blowup.verdict == BlowupVerdict::survived_horizon);

  SimulationConfig c3 = small_config();
  c3.n = 3;
  c3.p = critical_exponent(3);
  const RunReport r3 = run_chain(c3, {});
  bool saw_skip = false;
  for (const auto& row : r3.checks) {
    if (row.name == "weighted_Lp" || row.name == "log_refinement") {
      CHECK(row.status == CheckStatus::skip);
      saw_skip = true;
    }
  }
  CHECK(saw_skip);
}

TEST_CASE("disabled checks are skipped") {
  CheckToggles off;
  off.d2F0 = false;
  const RunReport r = run_chain(small_config(), off);
  CHECK(r.checks.front().name == "d2F0_identity");
  CHECK(r.checks.front().status == CheckStatus::skip);
}

TEST_CASE("cli exit codes") {
  CHECK(cli({"exponents", "--n", "4"}) == 0);
  CHECK(cli({"exponents", "--n", "1"}) != 0);
  CHECK(cli({"exponents"}) == 2);
  CHECK(cli({"bogus"}) == 2);
  CHECK(cli({"simulate", "--h", "-1", "--out", scratch("bad").string().c_str()}) == 2);
  CHECK(cli({"radon-test"}) == 0);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
}

}
