#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "critwave/diagnostics.hpp"
#include "critwave/ode_blowup.hpp"
#include "critwave/radon.hpp"
#include "critwave/wave_solver.hpp"

namespace critwave::harness {

inline constexpr int kSummaryVersion = 1;

/// Which chain checks run; a disabled check is reported as skipped.
struct CheckToggles {
  bool d2F0 = true;
  bool holder = true;
  bool lemma22 = true;
  bool radon_wave = true;
  bool dalembert = true;
  bool weighted_Lp = true;
  bool log_refinement = true;
};

enum class PMode { absolute, offset };

/// Cartesian sweep; an empty axis keeps the base value unless every axis is
/// empty, in which case the sweep has no points.
struct SweepAxes {
  std::vector<int> n;
  std::vector<double> p;
  PMode p_mode = PMode::absolute;  ///< offset: p = p_c(n) + value
  std::vector<double> amplitude;

  bool empty() const { return n.empty() && p.empty() && amplitude.empty(); }
};

struct ExperimentConfig {
  SimulationConfig simulation;
  CheckToggles checks;
  std::string output_dir = "critwave_out";
  SweepAxes sweep;
  int jobs = 1;
};

/// Parses a config document. Missing fields keep their defaults; "p" may be
/// the string "critical". Throws std::invalid_argument on malformed input.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const SimulationConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Points of the sweep in axis order n, p, amplitude; each is validated.
std::vector<SimulationConfig> expand_sweep(const ExperimentConfig& config);

enum class CheckStatus { pass, fail, skip };
std::string to_string(CheckStatus status);

struct CheckRow {
  std::string name;
  CheckStatus status = CheckStatus::skip;
  std::string reason;  ///< why skipped or failed; empty on pass
  ResidualSummary summary;
  std::map<std::string, double> metrics;
};

struct RunReport {
  std::string run_id;
  SimulationConfig config;
  BlowupReport blowup;
  std::optional<GrowthFit> growth;
  std::vector<CheckRow> checks;
  double wall_seconds = 0.0;
  std::string error;  ///< set when the run could not be carried out

  bool passed() const;
};

nlohmann::json to_json(const RunReport& report);

/// Everything a chain run produces besides the report.
struct RunArtifacts {
  DiagnosticsSeries series;
  std::map<std::string, std::vector<double>> columns;  ///< per-sample residual columns
  std::vector<RadialState> snapshots;
  std::vector<RadonSection> radon;
  std::vector<double> log_refinement_t;
  std::vector<double> log_refinement_margin;
};

/// Runs the simulation with the diagnostics observer and the ordered check
/// chain. Deterministic in the config.
RunReport run_chain(const SimulationConfig& config, const CheckToggles& checks,
                    RunArtifacts* artifacts = nullptr);

/// Writes diagnostics.csv, snapshot and radon CSVs with JSON sidecars, the
/// log refinement series and report.json into `dir`.
void write_artifacts(const std::filesystem::path& dir, const RunReport& report,
                     const RunArtifacts& artifacts);

/// {version, config, reports[]}.
nlohmann::json summary_document(const ExperimentConfig& config,
                                const std::vector<RunReport>& reports);
void write_summary(const std::filesystem::path& dir, const ExperimentConfig& config,
                   const std::vector<RunReport>& reports);

/// Runs every sweep point on up to config.jobs threads. Reports are keyed
/// by run id ("run_000", ...) and returned in id order; a failed run is
/// recorded in its report rather than thrown.
std::vector<RunReport> run_sweep(const ExperimentConfig& config, bool write_files);

/// Fixed 17-significant-digit formatting used in every CSV.
std::string format_number(double value);

nlohmann::json exponents_json(int n, double p);
nlohmann::json threshold_json(const ThresholdResult& result, double p, double a, double q,
                              double K1);

/// Gaussian and ball-indicator oracles for n in {3, 4, 5} on ρ ∈ [0, 3],
/// plus linearity; max-abs errors against the closed forms.
struct RadonOracleRow {
  int n = 0;
  std::string name;
  double max_abs_error = 0.0;
  bool passed = false;
};
std::vector<RadonOracleRow> radon_oracles(double tolerance = 1e-6);

/// Entry point shared by the executable and the tests; returns the exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace critwave::harness
