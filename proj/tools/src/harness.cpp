#include "critwave/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <stdexcept>

#include "critwave/criticality.hpp"
#include "critwave/radon.hpp"
#include "critwave/sharp_transform.hpp"
#include "critwave/special_fn.hpp"

namespace critwave::harness {

using nlohmann::json;

namespace {

// Tolerances of the individual chain checks.
constexpr double kD2F0Tol = 2e-2;
constexpr double kLemma22Tol = 1e-6;
constexpr double kRadonMassTol = 1e-4;
constexpr double kRadonWaveTol = 5e-2;
constexpr double kDominationTol = 1e-10;

template <class T>
void read_field(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config field '") + key + "': " + e.what());
  }
}

double parse_p(const json& value, int n) {
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s == "critical" || s == "p_c") return critical_exponent(n);
    throw std::invalid_argument("config field 'p': expected a number or \"critical\"");
  }
  if (!value.is_number()) throw std::invalid_argument("config field 'p': expected a number");
  return value.get<double>();
}

SimulationConfig simulation_from_json(const json& doc) {
  SimulationConfig c;
  if (!doc.is_object()) throw std::invalid_argument("config 'simulation' must be an object");
  read_field(doc, "n", c.n);
  if (doc.contains("p")) c.p = parse_p(doc.at("p"), c.n);
  read_field(doc, "R", c.R);
  read_field(doc, "h", c.h);
  read_field(doc, "cfl", c.cfl);
  read_field(doc, "t_max", c.t_max);
  read_field(doc, "r_max", c.r_max);
  read_field(doc, "blowup_threshold", c.blowup_threshold);
  read_field(doc, "dt_floor", c.dt_floor);
  read_field(doc, "sample_interval", c.sample_interval);
  read_field(doc, "nonlinear", c.nonlinear);
  if (doc.contains("initial_data")) {
    const json& id = doc.at("initial_data");
    if (id.contains("kind")) c.initial_data.kind = initial_data_kind_from_string(id.at("kind").get<std::string>());
    read_field(id, "amplitude", c.initial_data.amplitude);
    read_field(id, "radius", c.initial_data.radius);
  }
  return c;
}

json summary_json(const ResidualSummary& s) {
  return {{"min", s.min}, {"max", s.max}, {"violations", s.violations}, {"samples", s.samples}};
}

json growth_json(const GrowthFit& g) {
  return {{"window", {g.window.t_lo, g.window.t_hi}},
          {"samples", g.samples},
          {"fitted_exponent", g.fitted_exponent},
          {"loglog_slope", g.loglog_slope},
          {"log_factor_slope", g.log_factor_slope},
          {"K0_estimate", g.K0_estimate}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

CheckRow skipped(std::string name, std::string reason) {
  CheckRow row;
  row.name = std::move(name);
  row.status = CheckStatus::skip;
  row.reason = std::move(reason);
  return row;
}

// Marks the row failed when it has violations and no reason was set yet.
void settle(CheckRow& row, const std::string& what) {
  if (row.summary.violations > 0) {
    row.status = CheckStatus::fail;
    if (row.reason.empty()) row.reason = std::to_string(row.summary.violations) + " " + what;
  } else {
    row.status = CheckStatus::pass;
  }
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Times at which snapshots feed the Radon and Step-4 checks.
std::vector<double> check_times(const SimulationConfig& c) {
  std::vector<double> out;
  for (int k = 1; k <= 8; ++k) out.push_back(c.t_max * k / 8.0);
  return out;
}

double wave_center(const SimulationConfig& c) { return std::min(1.0, 0.5 * c.t_max); }
double wave_spacing(const SimulationConfig& c) { return 4.0 * c.h; }

const RadialState* find_snapshot(const std::vector<RadialState>& snaps, double t, double eps) {
  for (const auto& s : snaps) {
    if (std::abs(s.t - t) <= eps) return &s;
  }
  return nullptr;
}

}  // namespace

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skip: return "skip";
  }
  return "?";
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

json to_json(const SimulationConfig& c) {
  return {{"n", c.n},
          {"p", c.p},
          {"R", c.R},
          {"h", c.h},
          {"cfl", c.cfl},
          {"t_max", c.t_max},
          {"r_max", c.r_max},
          {"blowup_threshold", c.blowup_threshold},
          {"dt_floor", c.dt_floor},
          {"sample_interval", c.sample_interval},
          {"nonlinear", c.nonlinear},
          {"initial_data",
           {{"kind", to_string(c.initial_data.kind)},
            {"amplitude", c.initial_data.amplitude},
            {"radius", c.initial_data.radius}}}};
}

json to_json(const ExperimentConfig& c) {
  const auto& k = c.checks;
  return {{"simulation", to_json(c.simulation)},
          {"checks",
           {{"d2F0", k.d2F0},
            {"holder", k.holder},
            {"lemma22", k.lemma22},
            {"radon_wave", k.radon_wave},
            {"dalembert", k.dalembert},
            {"weighted_Lp", k.weighted_Lp},
            {"log_refinement", k.log_refinement}}},
          {"output_dir", c.output_dir},
          {"sweep",
           {{"n", c.sweep.n},
            {"p", c.sweep.p},
            {"p_mode", c.sweep.p_mode == PMode::offset ? "offset" : "absolute"},
            {"amplitude", c.sweep.amplitude}}},
          {"jobs", c.jobs}};
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  ExperimentConfig c;
  if (doc.contains("simulation")) c.simulation = simulation_from_json(doc.at("simulation"));
  if (doc.contains("checks")) {
    const json& k = doc.at("checks");
    read_field(k, "d2F0", c.checks.d2F0);
    read_field(k, "holder", c.checks.holder);
    read_field(k, "lemma22", c.checks.lemma22);
    read_field(k, "radon_wave", c.checks.radon_wave);
    read_field(k, "dalembert", c.checks.dalembert);
    read_field(k, "weighted_Lp", c.checks.weighted_Lp);
    read_field(k, "log_refinement", c.checks.log_refinement);
  }
  read_field(doc, "output_dir", c.output_dir);
  read_field(doc, "jobs", c.jobs);
  if (c.jobs < 1) throw std::invalid_argument("config field 'jobs' must be >= 1");
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    read_field(s, "n", c.sweep.n);
    read_field(s, "p", c.sweep.p);
    read_field(s, "amplitude", c.sweep.amplitude);
    std::string mode = "absolute";
    read_field(s, "p_mode", mode);
    if (mode == "offset") c.sweep.p_mode = PMode::offset;
    else if (mode != "absolute") throw std::invalid_argument("sweep.p_mode must be 'absolute' or 'offset'");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

std::vector<SimulationConfig> expand_sweep(const ExperimentConfig& config) {
  std::vector<SimulationConfig> out;
  if (config.sweep.empty()) return out;
  const auto& base = config.simulation;
  const std::vector<int> ns = config.sweep.n.empty() ? std::vector<int>{base.n} : config.sweep.n;
  const bool offset = config.sweep.p_mode == PMode::offset;
  const std::vector<double> ps =
      config.sweep.p.empty() ? std::vector<double>{offset ? 0.0 : base.p} : config.sweep.p;
  const std::vector<double> amps = config.sweep.amplitude.empty()
                                       ? std::vector<double>{base.initial_data.amplitude}
                                       : config.sweep.amplitude;
  for (int n : ns) {
    for (double p : ps) {
      for (double amp : amps) {
        SimulationConfig c = base;
        c.n = n;
        c.p = offset ? critical_exponent(n) + p : p;
        c.initial_data.amplitude = amp;
        c.validate();
        out.push_back(c);
      }
    }
  }
  return out;
}

bool RunReport::passed() const {
  if (!error.empty()) return false;
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckRow& r) { return r.status == CheckStatus::fail; });
}

json to_json(const RunReport& r) {
  json checks = json::array();
  for (const auto& row : r.checks) {
    checks.push_back({{"name", row.name},
                      {"status", to_string(row.status)},
                      {"reason", row.reason},
                      {"summary", summary_json(row.summary)},
                      {"metrics", row.metrics}});
  }
  const auto& b = r.blowup;
  json out = {{"run_id", r.run_id},
              {"config", to_json(r.config)},
              {"blowup",
               {{"verdict", to_string(b.verdict)},
                {"t_detect", optional_json(b.t_detect)},
                {"resolution_limited", b.resolution_limited},
                {"non_finite", b.non_finite},
                {"refinement_consistency", optional_json(b.refinement_consistency)},
                {"t_end", b.t_end},
                {"min_dt", b.min_dt},
                {"steps", b.steps}}},
              {"growth_fit", r.growth ? growth_json(*r.growth) : json(nullptr)},
              {"checks", checks},
              {"passed", r.passed()},
              {"wall_seconds", r.wall_seconds}};
  if (!r.error.empty()) out["error"] = r.error;
  return out;
}

RunReport run_chain(const SimulationConfig& config, const CheckToggles& toggles,
                    RunArtifacts* artifacts) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  RunReport report;
  report.config = config;

  const ExponentSet ex = exponent_set(config.n, config.p);
  const TestFunctionContext ctx(config.n);
  DiagnosticsRecorder recorder(config, ctx);

  const double tc = wave_center(config);
  const double dw = wave_spacing(config);
  std::vector<double> snap_times = check_times(config);
  if (toggles.radon_wave && tc - dw > 0.0) {
    for (double t : {tc - dw, tc, tc + dw}) snap_times.push_back(t);
  }
  std::sort(snap_times.begin(), snap_times.end());

  SimulationResult sim = simulate(config, {std::ref(recorder)}, snap_times);
  report.blowup = sim.report;
  const DiagnosticsSeries& series = recorder.series();
  const DataIntegrals& data = recorder.data();
  const bool blew_up = sim.report.verdict == BlowupVerdict::blew_up;
  const bool zero_data = all_zero(series.F0) && all_zero(series.Lp);
  const double eps = 1e-9 * std::max(1.0, config.t_max);

  // Pre-blow-up part of the series: the sampled stride cannot resolve the
  // final approach, so samples above √threshold are excluded there.
  DiagnosticsSeries pre = series;
  if (blew_up) {
    double t_last = series.times.empty() ? 0.0 : series.times.front();
    const double cap = std::sqrt(config.blowup_threshold);
    for (std::size_t i = 0; i < series.size() && series.umax[i] <= cap; ++i) t_last = series.times[i];
    pre = series.truncated(t_last);
  }
  const std::size_t m = series.size();
  std::map<std::string, std::vector<double>> columns;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const char* key : {"res_2_2p", "res_2_3", "res_2_4", "lemma22_margin"}) {
    columns[key].assign(m, nan);
  }

  // (1) second derivative identity
  if (!toggles.d2F0) {
    report.checks.push_back(skipped("d2F0_identity", "disabled in config"));
  } else if (!config.nonlinear) {
    report.checks.push_back(skipped("d2F0_identity", "linear run: the identity's source term is absent"));
  } else if (pre.size() < 3) {
    report.checks.push_back(skipped("d2F0_identity", "fewer than 3 samples before blow-up"));
  } else {
    const auto res = check_d2F0_identity(pre);
    std::copy(res.begin(), res.end(), columns["res_2_2p"].begin());
    CheckRow row;
    row.name = "d2F0_identity";
    row.summary = summarize(std::span<const double>(res), [](double v) { return v > kD2F0Tol; });
    row.metrics["tolerance"] = kD2F0Tol;
    settle(row, "samples above tolerance");
    report.checks.push_back(row);
  }

  // (2), (3) Hölder chain
  if (!toggles.holder) {
    report.checks.push_back(skipped("holder_volume", "disabled in config"));
    report.checks.push_back(skipped("holder_test_function", "disabled in config"));
  } else {
    const auto I_values = I_series(ctx, config.p, config.R, series.times);
    const auto h = check_holder_chain(series, ex, I_values);
    std::copy(h.volume_bound.begin(), h.volume_bound.end(), columns["res_2_3"].begin());
    std::copy(h.test_fn_bound.begin(), h.test_fn_bound.end(), columns["res_2_4"].begin());
    auto make = [&](const char* name, const std::vector<double>& gaps) {
      CheckRow row;
      row.name = name;
      row.summary = summarize(std::span<const double>(gaps), [](double v) { return v < -1e-8; });
      settle(row, "negative gaps beyond 1e-8 relative");
      return row;
    };
    report.checks.push_back(make("holder_volume", h.volume_bound));
    CheckRow test_fn = make("holder_test_function", h.test_fn_bound);
    double worst = 0.0;
    for (const auto& I : I_values) worst = std::max(worst, I.normalized);
    test_fn.metrics["max_normalized_I"] = worst;
    report.checks.push_back(test_fn);
  }

  // (4) lower bound for F1
  if (!toggles.lemma22) {
    report.checks.push_back(skipped("lemma22_lower_bound", "disabled in config"));
  } else if (m == 0) {
    report.checks.push_back(skipped("lemma22_lower_bound", "no samples"));
  } else {
    const auto margins = lemma22_margins(series, data);
    std::copy(margins.begin(), margins.end(), columns["lemma22_margin"].begin());
    CheckRow row;
    row.name = "lemma22_lower_bound";
    row.summary = summarize(std::span<const double>(margins), [](double v) { return v < -kLemma22Tol; });
    row.metrics["int_u0_plus_u1_phi1"] = data.sum_phi1;
    row.metrics["int_u0_phi1"] = data.u0_phi1;
    settle(row, "samples below the bound");
    report.checks.push_back(row);
  }

  // (5) growth law F0 >= K0 (t+R)^a
  {
    CheckRow row;
    row.name = "growth_fit";
    if (zero_data) {
      row = skipped("growth_fit", "zero data: F0 vanishes identically");
    } else {
      try {
        const GrowthFit fit = fit_growth(pre, ex, default_growth_window(pre));
        report.growth = fit;
        row.metrics["fitted_exponent"] = fit.fitted_exponent;
        row.metrics["a"] = ex.a;
        row.metrics["loglog_slope"] = fit.loglog_slope;
        row.metrics["log_factor_slope"] = fit.log_factor_slope;
        row.metrics["K0_estimate"] = fit.K0_estimate;
        if (fit.K0_estimate > 0.0) {
          row.status = CheckStatus::pass;
        } else {
          row.status = CheckStatus::fail;
          row.reason = "K0 estimate not positive";
        }
      } catch (const std::domain_error& e) {
        row.status = CheckStatus::fail;
        row.reason = e.what();
      } catch (const std::invalid_argument& e) {
        row = skipped("growth_fit", e.what());
      }
    }
    report.checks.push_back(row);
  }

  // Snapshot-based checks.
  std::vector<const RadialState*> check_snaps;
  for (double t : check_times(config)) {
    if (const RadialState* s = find_snapshot(sim.snapshots, t, eps)) check_snaps.push_back(s);
  }
  std::vector<RadonSection> radon_u;
  const bool need_radon_u = toggles.radon_wave || toggles.dalembert;
  if (need_radon_u) {
    for (const RadialState* s : check_snaps) radon_u.push_back(radon_section(*s, RadonKind::of_u, config.p));
  }

  // (6) Radon transform: mass identity, support, 1-D wave residual
  if (!toggles.radon_wave) {
    report.checks.push_back(skipped("radon_mass", "disabled in config"));
    report.checks.push_back(skipped("radon_support", "disabled in config"));
    report.checks.push_back(skipped("radon_wave_residual", "disabled in config"));
  } else {
    if (radon_u.empty()) {
      report.checks.push_back(skipped("radon_mass", "no snapshot before blow-up"));
      report.checks.push_back(skipped("radon_support", "no snapshot before blow-up"));
    } else {
      std::vector<double> mass_err;
      std::vector<double> support;
      for (std::size_t k = 0; k < radon_u.size(); ++k) {
        const double f0 = F0(*check_snaps[k]);
        const double mass = radon_mass(radon_u[k]);
        mass_err.push_back(std::abs(mass - f0) / std::max(std::abs(f0), 1e-30));
        double outside = 0.0;
        // Solver window t+R+2h widened by the 2h reach of the cubic stencil.
        const double edge = radon_u[k].t + config.R + 4.0 * config.h;
        for (std::size_t j = 0; j < radon_u[k].values.size(); ++j) {
          if (radon_u[k].rho(j) > edge) outside = std::max(outside, std::abs(radon_u[k].values[j]));
        }
        support.push_back(outside);
      }
      CheckRow mass;
      mass.name = "radon_mass";
      mass.summary = summarize(std::span<const double>(mass_err), [](double v) { return v > kRadonMassTol; });
      mass.metrics["tolerance"] = kRadonMassTol;
      if (zero_data) mass.summary.violations = 0;
      settle(mass, "snapshots off the mass identity");
      report.checks.push_back(mass);
      CheckRow sup;
      sup.name = "radon_support";
      sup.summary = summarize(std::span<const double>(support), [](double v) { return v != 0.0; });
      settle(sup, "snapshots with mass outside the cone");
      report.checks.push_back(sup);
    }
    std::vector<RadonSection> u_secs, src_secs;
    for (double t : {tc - dw, tc, tc + dw}) {
      if (const RadialState* s = find_snapshot(sim.snapshots, t, eps)) {
        u_secs.push_back(radon_section(*s, RadonKind::of_u, config.p));
        src_secs.push_back(radon_section(*s, RadonKind::of_abs_u_pow_p, config.p));
      }
    }
    if (u_secs.size() < 3) {
      report.checks.push_back(skipped("radon_wave_residual", "no snapshot triple before blow-up"));
    } else {
      if (!config.nonlinear) {
        for (auto& s : src_secs) std::fill(s.values.begin(), s.values.end(), 0.0);
      }
      const WaveResidual w = check_1d_wave(u_secs, src_secs, config.R);
      CheckRow row;
      row.name = "radon_wave_residual";
      row.summary.min = row.summary.max = w.relative_l2;
      row.summary.samples = 1;
      row.metrics["l2"] = w.l2;
      row.metrics["reference_l2"] = w.reference_l2;
      row.metrics["relative_l2"] = w.relative_l2;
      row.metrics["t"] = tc;
      row.metrics["tolerance"] = kRadonWaveTol;
      row.summary.violations = (w.relative_l2 > kRadonWaveTol && !zero_data) ? 1 : 0;
      settle(row, "relative residual above tolerance");
      report.checks.push_back(row);
    }
  }

  // (7) D'Alembert lower bound and the power-law ratio
  if (!toggles.dalembert) {
    report.checks.push_back(skipped("dalembert_bound", "disabled in config"));
  } else if (!config.nonlinear) {
    report.checks.push_back(skipped("dalembert_bound", "linear run: no source"));
  } else {
    std::vector<double> gaps;
    std::size_t below = 0;
    double power_inf = std::numeric_limits<double>::infinity();
    for (const auto& sec : radon_u) {
      for (std::size_t j = 0; j < sec.values.size(); ++j) {
        const double rho = sec.rho(j);
        if (!(sec.t - rho - config.R > 0.0)) break;
        const double bound = dalembert_lower_bound(series.times, series.Lp, rho, sec.t, config.R);
        gaps.push_back(relative_gap(sec.values[j], bound));
        if (inequality_violated(sec.values[j], bound, 1e-6)) ++below;
        if (sec.t - rho - config.R >= 1.0) {
          power_inf = std::min(power_inf, power_lower_bound_check(sec, rho, sec.t, config.R, ex));
        }
      }
    }
    if (gaps.empty()) {
      report.checks.push_back(skipped("dalembert_bound", "no snapshot with t > R before blow-up"));
    } else {
      CheckRow row;
      row.name = "dalembert_bound";
      row.summary = summarize(std::span<const double>(gaps), [](double) { return false; });
      row.summary.violations = below;
      if (std::isfinite(power_inf)) row.metrics["power_ratio_inf"] = power_inf;
      settle(row, "nodes below the bound");
      report.checks.push_back(row);
    }
  }

  // (8) Step 4: pointwise domination and the weighted inequality
  if (!toggles.weighted_Lp) {
    report.checks.push_back(skipped("pointwise_domination", "disabled in config"));
    report.checks.push_back(skipped("weighted_Lp", "disabled in config"));
  } else if (config.n < 4) {
    const std::string why = "requires n >= 4 (the weight step needs p <= 2; p_c(" +
                            std::to_string(config.n) + ") > 2)";
    report.checks.push_back(skipped("pointwise_domination", why));
    report.checks.push_back(skipped("weighted_Lp", why));
  } else if (check_snaps.empty()) {
    report.checks.push_back(skipped("pointwise_domination", "no snapshot before blow-up"));
    report.checks.push_back(skipped("weighted_Lp", "no snapshot before blow-up"));
  } else {
    std::vector<double> dom_margin;
    std::vector<double> ratios;
    for (const RadialState* s : check_snaps) {
      const LineField f = weighted_profile(*s, config.R, config.p);
      const auto margin = check_pointwise_domination(f);
      double scale = 1.0;
      for (double v : f.values) scale = std::max(scale, std::abs(v));
      double worst = std::numeric_limits<double>::infinity();
      for (double v : margin) worst = std::min(worst, v / scale);
      dom_margin.push_back(worst);
      const RadonSection abs_sec = radon_section(*s, RadonKind::of_abs_u, config.p);
      const WeightedInequality w = weighted_inequality_check(abs_sec, *s, ex, config.R);
      if (w.rhs > 0.0) ratios.push_back(w.lhs / w.rhs);
      else ratios.push_back(w.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    CheckRow dom;
    dom.name = "pointwise_domination";
    dom.summary = summarize(std::span<const double>(dom_margin), [](double v) { return v < -kDominationTol; });
    settle(dom, "snapshots where |Tf| exceeds 2M(|f|)");
    report.checks.push_back(dom);
    CheckRow wl;
    wl.name = "weighted_Lp";
    wl.summary = summarize(std::span<const double>(ratios), [](double v) { return !std::isfinite(v); });
    wl.metrics["empirical_C"] = wl.summary.max;
    settle(wl, "snapshots with an unbounded ratio");
    report.checks.push_back(wl);
  }

  // (9) logarithmic refinement
  std::vector<double> lr_t, lr_m;
  if (!toggles.log_refinement) {
    report.checks.push_back(skipped("log_refinement", "disabled in config"));
  } else if (config.n < 4) {
    report.checks.push_back(skipped("log_refinement", "requires n >= 4 (the weight step needs p <= 2)"));
  } else if (zero_data) {
    report.checks.push_back(skipped("log_refinement", "zero data: the positivity hypothesis fails"));
  } else {
    try {
      const auto lr = log_refinement_check(pre.times, pre.Lp, ex, config.R);
      lr_t = lr.times;
      lr_m = lr.margin;
      CheckRow row;
      row.name = "log_refinement";
      row.summary = summarize(std::span<const double>(lr.margin), [](double v) { return !(v > 0.0); });
      row.metrics["margin_inf"] = row.summary.min;
      if (lr.margin.size() >= 2) {
        row.metrics["margin_trend"] = least_squares_line(lr.times, lr.margin).slope;
      }
      settle(row, "samples without a positive margin");
      report.checks.push_back(row);
    } catch (const std::invalid_argument& e) {
      report.checks.push_back(skipped("log_refinement", e.what()));
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (artifacts) {
    artifacts->series = series;
    artifacts->columns = std::move(columns);
    artifacts->snapshots.clear();
    for (const RadialState* s : check_snaps) artifacts->snapshots.push_back(*s);
    artifacts->radon = std::move(radon_u);
    artifacts->log_refinement_t = std::move(lr_t);
    artifacts->log_refinement_margin = std::move(lr_m);
  }
  return report;
}

void write_artifacts(const std::filesystem::path& dir, const RunReport& report,
                     const RunArtifacts& a) {
  std::filesystem::create_directories(dir);
  const auto& s = a.series;
  std::string csv = "t,F0,F1,Lp,umax,res_2_2p,res_2_3,res_2_4,lemma22_margin\n";
  auto column = [&](const char* key, std::size_t i) {
    auto it = a.columns.find(key);
    if (it == a.columns.end() || i >= it->second.size()) return std::string("nan");
    return format_number(it->second[i]);
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    csv += format_number(s.times[i]) + ',' + format_number(s.F0[i]) + ',' + format_number(s.F1[i]) +
           ',' + format_number(s.Lp[i]) + ',' + format_number(s.umax[i]) + ',' +
           column("res_2_2p", i) + ',' + column("res_2_3", i) + ',' + column("res_2_4", i) + ',' +
           column("lemma22_margin", i) + '\n';
  }
  write_text(dir / "diagnostics.csv", csv);

  const auto& c = report.config;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    const RadialState& st = a.snapshots[k];
    const std::string stem = "snapshot_" + std::to_string(k);
    std::string body = "r,u,v\n";
    for (std::size_t i = 0; i < st.size(); ++i) {
      body += format_number(st.r(i)) + ',' + format_number(st.u[i]) + ',' + format_number(st.v[i]) + '\n';
    }
    write_text(dir / (stem + ".csv"), body);
    write_text(dir / (stem + ".json"),
               json{{"n", st.n}, {"p", c.p}, {"R", c.R}, {"h", st.h}, {"t", st.t}}.dump(2) + "\n");
  }
  for (std::size_t k = 0; k < a.radon.size(); ++k) {
    const RadonSection& sec = a.radon[k];
    const std::string stem = "radon_" + std::to_string(k);
    std::string body = "rho,value\n";
    for (std::size_t j = 0; j < sec.values.size(); ++j) {
      body += format_number(sec.rho(j)) + ',' + format_number(sec.values[j]) + '\n';
    }
    write_text(dir / (stem + ".csv"), body);
    write_text(dir / (stem + ".json"), json{{"t", sec.t},
                                            {"kind", to_string(sec.kind)},
                                            {"n", sec.n},
                                            {"p", sec.p},
                                            {"R", c.R}}
                                           .dump(2) + "\n");
  }
  if (!a.log_refinement_t.empty()) {
    std::string body = "t,value\n";
    for (std::size_t i = 0; i < a.log_refinement_t.size(); ++i) {
      body += format_number(a.log_refinement_t[i]) + ',' + format_number(a.log_refinement_margin[i]) + '\n';
    }
    write_text(dir / "log_refinement.csv", body);
  }
  write_text(dir / "report.json", to_json(report).dump(2) + "\n");
}

json summary_document(const ExperimentConfig& config, const std::vector<RunReport>& reports) {
  json list = json::array();
  for (const auto& r : reports) list.push_back(to_json(r));
  return {{"version", kSummaryVersion}, {"config", to_json(config)}, {"reports", list}};
}

void write_summary(const std::filesystem::path& dir, const ExperimentConfig& config,
                   const std::vector<RunReport>& reports) {
  std::filesystem::create_directories(dir);
  write_text(dir / "summary.json", summary_document(config, reports).dump(2) + "\n");
}

std::vector<RunReport> run_sweep(const ExperimentConfig& config, bool write_files) {
  const auto points = expand_sweep(config);
  std::vector<RunReport> reports(points.size());
  std::atomic<std::size_t> next{0};
  const std::filesystem::path root(config.output_dir);

  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      char id[32];
      std::snprintf(id, sizeof id, "run_%03zu", i);
      RunArtifacts art;
      try {
        reports[i] = run_chain(points[i], config.checks, write_files ? &art : nullptr);
      } catch (const std::exception& e) {
        reports[i].config = points[i];
        reports[i].error = e.what();
      }
      reports[i].run_id = id;
      if (write_files && reports[i].error.empty()) write_artifacts(root / id, reports[i], art);
    }
  };
  const auto jobs = static_cast<std::size_t>(std::max(1, config.jobs));
  const std::size_t workers = std::min(jobs, std::max<std::size_t>(1, points.size()));
  std::vector<std::future<void>> tasks;
  for (std::size_t w = 1; w < workers; ++w) tasks.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& t : tasks) t.get();

  if (write_files) {
    std::filesystem::create_directories(root);
    std::string csv = "run_id,n,p,amplitude,verdict,t_detect,passed\n";
    for (const auto& r : reports) {
      csv += r.run_id + ',' + std::to_string(r.config.n) + ',' + format_number(r.config.p) + ',' +
             format_number(r.config.initial_data.amplitude) + ',' +
             (r.error.empty() ? to_string(r.blowup.verdict) : std::string("error")) + ',' +
             (r.blowup.t_detect ? format_number(*r.blowup.t_detect) : std::string("")) + ',' +
             (r.passed() ? "1" : "0") + '\n';
    }
    write_text(root / "summary.csv", csv);
    write_summary(root, config, reports);
  }
  return reports;
}

json exponents_json(int n, double p) {
  const ExponentSet e = exponent_set(n, p);
  json residuals = json::object();
  for (const auto& r : verify_critical_identities(e)) residuals[r.name] = r.value;
  return {{"n", e.n},       {"p", e.p},       {"p_c", e.p_c},
          {"a", e.a},       {"q", e.q},       {"K1", e.K1},
          {"p_prime", e.p_prime}, {"residuals", residuals}};
}

json threshold_json(const ThresholdResult& r, double p, double a, double q, double K1) {
  return {{"p", p},
          {"a", a},
          {"q", q},
          {"K1", K1},
          {"R", r.R},
          {"T0", r.T0},
          {"c0_estimate", r.c0},
          {"horizon", r.horizon},
          {"bracket", {r.lower, r.upper}},
          {"integrations", r.integrations},
          {"initialization", "envelope"}};
}

std::vector<RadonOracleRow> radon_oracles(double tolerance) {
  std::vector<RadonOracleRow> rows;
  for (int n : {3, 4, 5}) {
    const double ball = unit_ball_volume(n - 1);
    double gauss_err = 0.0, ind_err = 0.0, lin_err = 0.0;
    const double breaks[] = {1.0};
    for (int j = 0; j <= 300; ++j) {
      const double rho = 0.01 * j;
      auto gauss = [](double r) { return std::exp(-r * r); };
      auto ind = [](double r) { return r < 1.0 ? 1.0 : 0.0; };
      const double g = radon_radial(gauss, n, rho, 12.0);
      gauss_err = std::max(gauss_err, std::abs(g - std::pow(M_PI, 0.5 * (n - 1)) * std::exp(-rho * rho)));
      const double exact = rho < 1.0 ? ball * std::pow(1.0 - rho * rho, 0.5 * (n - 1)) : 0.0;
      const double i = radon_radial(ind, n, rho, 12.0, breaks);
      ind_err = std::max(ind_err, std::abs(i - exact));
      auto combo = [&](double r) { return 2.0 * gauss(r) - 3.0 * ind(r); };
      const double c = radon_radial(combo, n, rho, 12.0, breaks);
      lin_err = std::max(lin_err, std::abs(c - (2.0 * g - 3.0 * i)));
    }
    rows.push_back({n, "gaussian", gauss_err, gauss_err <= tolerance});
    rows.push_back({n, "ball_indicator", ind_err, ind_err <= tolerance});
    rows.push_back({n, "linearity", lin_err, lin_err <= 1e-12});
  }
  return rows;
}

}  // namespace critwave::harness
