#include "critwave/wave_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace critwave {

double InitialDataSpec::profile(double r) const {
  if (amplitude == 0.0) return 0.0;
  const double x = r / radius;
  if (x >= 1.0) return 0.0;
  return amplitude * std::exp(-1.0 / (1.0 - x * x));
}

std::string to_string(InitialDataKind kind) {
  switch (kind) {
    case InitialDataKind::smooth_bump:
      return "smooth_bump";
    case InitialDataKind::zero_displacement_bump_velocity:
      return "zero_displacement_bump_velocity";
  }
  return "unknown";
}

InitialDataKind initial_data_kind_from_string(const std::string& name) {
  if (name == "smooth_bump") return InitialDataKind::smooth_bump;
  if (name == "zero_displacement_bump_velocity") {
    return InitialDataKind::zero_displacement_bump_velocity;
  }
  throw std::invalid_argument("unknown initial data kind: " + name);
}

std::string to_string(BlowupVerdict verdict) {
  return verdict == BlowupVerdict::blew_up ? "blew_up" : "survived_horizon";
}

void SimulationConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("SimulationConfig: " + msg); };
  if (n < 2) fail("n must be >= 2");
  if (!(p > 1.0)) fail("p must be > 1");
  if (!(R > 0.0)) fail("R must be > 0");
  if (!(h > 0.0)) fail("h must be > 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl must lie in (0, 1]");
  if (!(t_max > 0.0)) fail("t_max must be > 0");
  if (r_max != 0.0 && !(r_max >= t_max + R + 2.0 * h)) {
    fail("r_max must be >= t_max + R + 2h");
  }
  if (!(blowup_threshold > 0.0)) fail("blowup_threshold must be > 0");
  if (!(dt_floor > 0.0)) fail("dt_floor must be > 0");
  if (!(sample_interval > 0.0)) fail("sample_interval must be > 0");
  if (!(initial_data.amplitude >= 0.0)) fail("amplitude must be >= 0");
  if (!(initial_data.radius > 0.0 && initial_data.radius <= R)) {
    fail("initial data radius must lie in (0, R]");
  }
}

double SimulationConfig::domain_radius() const {
  return r_max > 0.0 ? r_max : t_max + R + 4.0 * h;
}

std::size_t SimulationConfig::node_count() const {
  auto intervals = static_cast<std::size_t>(std::ceil(domain_radius() / h - 1e-9));
  if (intervals % 2 == 1) ++intervals;
  return intervals + 1;
}

RadialState make_state_from_profiles(const SimulationConfig& config,
                                     const std::function<double(double)>& u0,
                                     const std::function<double(double)>& u1) {
  config.validate();
  RadialState s;
  s.n = config.n;
  s.t = 0.0;
  s.h = config.h;
  const std::size_t count = config.node_count();
  s.u.assign(count, 0.0);
  s.v.assign(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = s.r(i);
    if (r >= config.R) break;
    s.u[i] = u0(r);
    s.v[i] = u1(r);
  }
  return s;
}

RadialState make_initial_state(const SimulationConfig& config) {
  const InitialDataSpec& data = config.initial_data;
  auto bump = [&](double r) { return data.profile(r); };
  auto zero = [](double) { return 0.0; };
  if (data.kind == InitialDataKind::smooth_bump) {
    return make_state_from_profiles(config, bump, zero);
  }
  return make_state_from_profiles(config, zero, bump);
}

RadialWaveSolver::RadialWaveSolver(SimulationConfig config)
    : RadialWaveSolver(config, make_initial_state(config)) {}

RadialWaveSolver::RadialWaveSolver(SimulationConfig config, RadialState initial)
    : config_(std::move(config)), state_(std::move(initial)) {
  config_.validate();
  if (state_.size() != config_.node_count() || state_.v.size() != state_.size()) {
    throw std::invalid_argument("RadialWaveSolver: state does not match the config grid");
  }
  dt_ = config_.cfl * config_.h;
  const std::size_t count = state_.size();
  plus_coeff_.assign(count, 0.0);
  minus_coeff_.assign(count, 0.0);
  const double inv_h2 = 1.0 / (config_.h * config_.h);
  for (std::size_t i = 1; i < count; ++i) {
    const double c = 0.5 * (config_.n - 1.0) / static_cast<double>(i);
    plus_coeff_[i] = (1.0 + c) * inv_h2;
    minus_coeff_[i] = (1.0 - c) * inv_h2;
  }
  accel_.assign(count, 0.0);
  v_half_.assign(count, 0.0);
}

double RadialWaveSolver::source(double u) const {
  if (!config_.nonlinear || u == 0.0) return 0.0;
  if (config_.p == 2.0) return u * u;
  return std::pow(std::abs(u), config_.p);
}

std::size_t RadialWaveSolver::support_limit(double t) const {
  const double cells = (t + config_.R) / config_.h + 2.0 + 1e-9;
  const auto limit = static_cast<std::size_t>(std::floor(cells));
  return std::min(limit, state_.size() - 2);
}

void RadialWaveSolver::acceleration(const std::vector<double>& u,
                                    std::vector<double>& out,
                                    std::size_t limit) const {
  const double inv_h2 = 1.0 / (config_.h * config_.h);
  out[0] = 2.0 * config_.n * (u[1] - u[0]) * inv_h2 + source(u[0]);
  for (std::size_t i = 1; i <= limit; ++i) {
    out[i] = plus_coeff_[i] * u[i + 1] - 2.0 * inv_h2 * u[i] +
             minus_coeff_[i] * u[i - 1] + source(u[i]);
  }
}

double RadialWaveSolver::max_abs_u() const {
  const std::size_t limit = support_limit(state_.t);
  double m = 0.0;
  for (std::size_t i = 0; i <= limit; ++i) {
    const double a = std::abs(state_.u[i]);
    if (!(a <= m)) m = a;  // propagates NaN
  }
  return m;
}

StepStatus RadialWaveSolver::advance(double max_dt) {
  if (config_.nonlinear) {
    const double m = max_abs_u();
    if (!std::isfinite(m)) return StepStatus::non_finite;
    const double growth = std::pow(m, config_.p - 1.0);
    while (growth * dt_ * dt_ > 0.1) {
      dt_ *= 0.5;
      if (dt_ < config_.dt_floor) return StepStatus::dt_floor_reached;
    }
  }
  const double dt = std::min(dt_, max_dt);
  if (!(dt > 0.0)) throw std::invalid_argument("RadialWaveSolver::advance: step must be > 0");

  const double t_new = state_.t + dt;
  const std::size_t limit = support_limit(t_new);
  std::vector<double>& u = state_.u;
  std::vector<double>& v = state_.v;

  acceleration(u, accel_, limit);
  for (std::size_t i = 0; i <= limit; ++i) {
    v_half_[i] = v[i] + 0.5 * dt * accel_[i];
    u[i] += dt * v_half_[i];
  }
  acceleration(u, accel_, limit);
  bool finite = true;
  for (std::size_t i = 0; i <= limit; ++i) {
    v[i] = v_half_[i] + 0.5 * dt * accel_[i];
    finite = finite && std::isfinite(u[i]) && std::isfinite(v[i]);
  }
  state_.t = t_new;
  ++steps_;
  return finite ? StepStatus::ok : StepStatus::non_finite;
}

RadialState step(const RadialState& state, const SimulationConfig& config) {
  RadialWaveSolver solver(config, state);
  solver.advance(std::numeric_limits<double>::infinity());
  return solver.state();
}

SimulationResult simulate_from(const SimulationConfig& config, RadialState initial,
                               const std::vector<StateObserver>& observers,
                               const std::vector<double>& snapshot_times) {
  RadialWaveSolver solver(config, std::move(initial));
  SimulationResult result;
  BlowupReport& report = result.report;
  report.min_dt = solver.dt();

  std::vector<double> snaps(snapshot_times);
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;

  const double eps = 1e-12 * std::max(1.0, config.t_max);
  std::size_t sample_index = 0;
  auto sample_time = [&](std::size_t k) {
    return std::min(config.t_max, static_cast<double>(k) * config.sample_interval);
  };

  auto observe = [&] {
    const RadialState& s = solver.state();
    report.history_t.push_back(s.t);
    report.max_u_history.push_back(solver.max_abs_u());
    for (const auto& obs : observers) obs(s);
  };
  auto take_snapshots = [&] {
    while (next_snap < snaps.size() && snaps[next_snap] <= solver.state().t + eps) {
      result.snapshots.push_back(solver.state());
      ++next_snap;
    }
  };

  observe();
  take_snapshots();
  ++sample_index;

  while (solver.state().t < config.t_max - eps) {
    const double t = solver.state().t;
    double stop = sample_time(sample_index);
    if (next_snap < snaps.size()) stop = std::min(stop, snaps[next_snap]);
    double max_dt = stop - t;
    // Merge a vanishing remainder into the current step.
    if (max_dt <= eps) max_dt = solver.dt();
    else if (max_dt < solver.dt() && max_dt > solver.dt() * (1.0 - 1e-9)) max_dt = solver.dt();

    const StepStatus status = solver.advance(max_dt);
    report.min_dt = std::min(report.min_dt, solver.dt());
    if (status == StepStatus::dt_floor_reached) {
      report.verdict = BlowupVerdict::blew_up;
      report.resolution_limited = true;
      report.t_detect = solver.state().t;
      break;
    }
    if (status == StepStatus::non_finite) {
      report.verdict = BlowupVerdict::blew_up;
      report.non_finite = true;
      report.t_detect = solver.state().t;
      break;
    }
    const double m = solver.max_abs_u();
    if (m > config.blowup_threshold) {
      report.verdict = BlowupVerdict::blew_up;
      report.t_detect = solver.state().t;
      report.history_t.push_back(solver.state().t);
      report.max_u_history.push_back(m);
      break;
    }
    take_snapshots();
    if (solver.state().t >= sample_time(sample_index) - eps) {
      observe();
      ++sample_index;
    }
  }
  report.t_end = solver.state().t;
  report.steps = solver.steps_taken();
  result.final_state = solver.state();
  return result;
}

SimulationResult simulate(const SimulationConfig& config,
                          const std::vector<StateObserver>& observers,
                          const std::vector<double>& snapshot_times) {
  return simulate_from(config, make_initial_state(config), observers, snapshot_times);
}

BlowupReport simulate_with_refinement(const SimulationConfig& config) {
  BlowupReport coarse = simulate(config).report;
  SimulationConfig fine_config = config;
  fine_config.h = 0.5 * config.h;
  const BlowupReport fine = simulate(fine_config).report;
  if (coarse.t_detect && fine.t_detect) {
    coarse.refinement_consistency =
        std::abs(*coarse.t_detect - *fine.t_detect) / *fine.t_detect;
  }
  return coarse;
}

}  // namespace critwave
