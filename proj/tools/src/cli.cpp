#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "critwave/criticality.hpp"
#include "critwave/harness.hpp"

namespace critwave::harness {

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct Overrides {
  std::string config_path;
  std::string out;
  std::optional<int> n;
  std::string p;
  std::optional<double> amplitude;
  std::optional<double> h;
  std::optional<double> t_max;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, Overrides& o) {
  // --h is the grid step, so help is long-form only.
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--config", o.config_path, "JSON experiment config");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--n", o.n, "space dimension");
  cmd->add_option("--p", o.p, "exponent, or 'critical'");
  cmd->add_option("--amplitude", o.amplitude, "initial data amplitude");
  cmd->add_option("--h", o.h, "radial grid step");
  cmd->add_option("--t-max", o.t_max, "time horizon");
  cmd->add_option("--jobs", o.jobs, "concurrent runs");
}

double parse_p(const std::string& text, int n) {
  if (text == "critical" || text == "p_c") return critical_exponent(n);
  std::size_t used = 0;
  const double p = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("--p: not a number: " + text);
  return p;
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  auto& s = c.simulation;
  if (o.n) s.n = *o.n;
  if (!o.p.empty()) s.p = parse_p(o.p, s.n);
  if (o.amplitude) s.initial_data.amplitude = *o.amplitude;
  if (o.h) s.h = *o.h;
  if (o.t_max) s.t_max = *o.t_max;
  if (o.jobs) c.jobs = *o.jobs;
  if (!o.out.empty()) c.output_dir = o.out;
  if (c.jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
  s.validate();
  return c;
}

void print_rows(const RunReport& r) {
  std::printf("%-22s %-5s %14s %14s %6s  %s\n", "check", "state", "min", "max", "viol", "note");
  for (const auto& row : r.checks) {
    std::printf("%-22s %-5s %14.6g %14.6g %6zu  %s\n", row.name.c_str(), to_string(row.status).c_str(),
                row.summary.min, row.summary.max, row.summary.violations, row.reason.c_str());
  }
}

int cmd_simulate(const Overrides& o, bool chain_only) {
  const ExperimentConfig c = resolve(o);
  RunArtifacts art;
  RunReport report = run_chain(c.simulation, c.checks, &art);
  report.run_id = "run_000";
  const std::filesystem::path out(c.output_dir);
  if (!chain_only) write_artifacts(out, report, art);
  write_summary(out, c, {report});
  std::printf("verdict %s", to_string(report.blowup.verdict).c_str());
  if (report.blowup.t_detect) std::printf(" at t = %.6f", *report.blowup.t_detect);
  std::printf(" (t_end %.6f, %zu steps, %.2f s)\n", report.blowup.t_end, report.blowup.steps,
              report.wall_seconds);
  print_rows(report);
  std::printf("%s\n", report.passed() ? "PASS" : "FAIL");
  return report.passed() ? 0 : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Numerical checks for the critical semilinear wave equation"};
  app.require_subcommand(1);

  Overrides common;
  auto* exponents = app.add_subcommand("exponents", "print the exponent set as JSON");
  int exp_n = 4;
  std::string exp_p = "critical";
  exponents->add_option("--n", exp_n, "space dimension")->required();
  exponents->add_option("--p", exp_p, "exponent, or 'critical'");

  auto* simulate_cmd = app.add_subcommand("simulate", "run one simulation and write CSV artifacts");
  add_common(simulate_cmd, common);
  auto* chain_cmd = app.add_subcommand("verify-chain", "run the ordered check chain");
  add_common(chain_cmd, common);
  auto* sweep_cmd = app.add_subcommand("sweep", "run every point of the config sweep");
  add_common(sweep_cmd, common);

  auto* ode = app.add_subcommand("ode-lemma", "threshold of the comparison ODE");
  int ode_n = 4;
  std::string ode_p = "critical";
  std::optional<double> ode_a, ode_q, ode_K1, ode_R, ode_T0;
  double horizon = 1e4;
  bool invariance = false;
  std::string integrator_name = "rk4";
  int ode_jobs = 1;
  ode->add_option("--n", ode_n, "dimension used for the default exponents");
  ode->add_option("--p", ode_p, "exponent, or 'critical'");
  ode->add_option("--a", ode_a, "growth exponent (default from n, p)");
  ode->add_option("--q", ode_q, "weight exponent (default from n, p)");
  ode->add_option("--K1", ode_K1, "source constant (default from n, p)");
  ode->add_option("--R", ode_R, "shift R of the unnormalized problem");
  ode->add_option("--T0", ode_T0, "start time of the unnormalized problem");
  ode->add_option("--horizon", horizon, "normalized horizon");
  ode->add_flag("--invariance", invariance, "also sweep (R, T0) over {1,3,10}^2");
  ode->add_option("--integrator", integrator_name, "rk4 or dopri5")
      ->check(CLI::IsMember({"rk4", "dopri5"}));
  ode->add_option("--jobs", ode_jobs, "concurrent integrations");

  auto* radon_cmd = app.add_subcommand("radon-test", "Radon transform closed-form oracles");
  double radon_tol = 1e-6;
  radon_cmd->add_option("--tol", radon_tol, "max-abs tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*exponents) {
      const double p = parse_p(exp_p, exp_n);
      std::cout << exponents_json(exp_n, p).dump(2) << "\n";
      return 0;
    }
    if (*simulate_cmd) return cmd_simulate(common, false);
    if (*chain_cmd) return cmd_simulate(common, true);
    if (*sweep_cmd) {
      const ExperimentConfig c = resolve(common);
      const auto reports = run_sweep(c, true);
      bool ok = true;
      for (const auto& r : reports) {
        std::printf("%s n=%d p=%.6g amplitude=%.6g %s%s\n", r.run_id.c_str(), r.config.n, r.config.p,
                    r.config.initial_data.amplitude,
                    r.error.empty() ? to_string(r.blowup.verdict).c_str() : "error",
                    r.passed() ? "" : " FAIL");
        if (!r.error.empty()) std::fprintf(stderr, "%s: %s\n", r.run_id.c_str(), r.error.c_str());
        ok = ok && r.passed();
      }
      std::printf("%zu runs, %s\n", reports.size(), ok ? "PASS" : "FAIL");
      return ok ? 0 : kExitCheckFailed;
    }
    if (*ode) {
      const double p = parse_p(ode_p, ode_n);
      const ExponentSet e = exponent_set(ode_n, p);
      const double a = ode_a.value_or(e.a);
      const double q = ode_q.value_or(e.q);
      const double K1 = ode_K1.value_or(e.K1);
      const auto integrator =
          integrator_name == "dopri5" ? OdeIntegrator::dopri5 : OdeIntegrator::rk4_step_doubling;
      const ThresholdResult th = threshold_c0_at(p, a, q, K1, ode_R.value_or(1.0),
                                                 ode_T0.value_or(0.0), horizon, integrator);
      nlohmann::json doc = threshold_json(th, p, a, q, K1);
      doc["integrator"] = integrator_name;
      bool ok = true;
      if (invariance) {
        std::vector<ShiftPoint> grid;
        for (double R : {1.0, 3.0, 10.0}) {
          for (double T0 : {1.0, 3.0, 10.0}) grid.push_back({R, T0});
        }
        const InvarianceReport inv = invariance_check(p, a, q, K1, grid, horizon, ode_jobs, integrator);
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& t : inv.thresholds) pts.push_back(threshold_json(t, p, a, q, K1));
        doc["invariance"] = {{"spread", inv.spread}, {"thresholds", pts}};
        ok = inv.spread < 0.05;
      }
      std::cout << doc.dump(2) << "\n";
      return ok ? 0 : kExitCheckFailed;
    }
    if (*radon_cmd) {
      const auto rows = radon_oracles(radon_tol);
      nlohmann::json out = nlohmann::json::array();
      bool ok = true;
      for (const auto& r : rows) {
        out.push_back({{"n", r.n}, {"oracle", r.name}, {"max_abs_error", r.max_abs_error}, {"passed", r.passed}});
        ok = ok && r.passed;
      }
      std::cout << out.dump(2) << "\n";
      return ok ? 0 : kExitCheckFailed;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace critwave::harness
