#include "critwave/ode_blowup.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace critwave {

namespace {

using OdeState = std::array<double, 2>;

struct Rhs {
  double p, q, K1, R;
  void operator()(const OdeState& y, OdeState& dy, double t) const {
    dy[0] = y[1];
    const double shift = t + R;
    const double weight = q == 0.0 ? 1.0 : std::pow(shift, -q);
    dy[1] = K1 * weight * (p == 2.0 ? y[0] * y[0] : std::pow(std::abs(y[0]), p));
  }
};

OdeState rk4(const Rhs& f, const OdeState& y, double t, double dt) {
  OdeState k1, k2, k3, k4, tmp;
  f(y, k1, t);
  for (int i = 0; i < 2; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  f(tmp, k2, t + 0.5 * dt);
  for (int i = 0; i < 2; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  f(tmp, k3, t + 0.5 * dt);
  for (int i = 0; i < 2; ++i) tmp[i] = y[i] + dt * k3[i];
  f(tmp, k4, t + dt);
  OdeState out;
  for (int i = 0; i < 2; ++i) out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

bool finite(const OdeState& y) { return std::isfinite(y[0]) && std::isfinite(y[1]); }

// Bookkeeping shared by both integrators after an accepted step.
struct Tracker {
  const OdeOptions& options;
  OdeBlowupReport report;
  double t_prev = 0.0;

  // Returns true when integration should stop.
  bool accept(double t, double step, const OdeState& y) {
    ++report.samples;
    report.min_dt = report.samples == 1 ? step : std::min(report.min_dt, step);
    report.t_end = t;
    report.F_end = y[0];
    if (y[0] > options.blowup_value && step < options.dt_floor) {
      report.verdict = OdeVerdict::blew_up;
      report.t_blowup = t;
      report.t_blowup_lower = t_prev;
      return true;
    }
    t_prev = t;
    return false;
  }
};

OdeBlowupReport run_rk4(const IvpSpec& spec, const OdeOptions& options) {
  const Rhs f{spec.p, spec.q, spec.K1, spec.R};
  Tracker tracker{options, {}, spec.t0};
  OdeState y{spec.F0, spec.dF0};
  double t = spec.t0;
  double dt = options.initial_dt;
  tracker.report.t_end = t;
  tracker.report.F_end = y[0];
  for (std::size_t iter = 0; iter < options.max_steps; ++iter) {
    if (t >= spec.horizon) return tracker.report;
    const double step = std::min(dt, spec.horizon - t);
    const OdeState full = rk4(f, y, t, step);
    const OdeState half = rk4(f, rk4(f, y, t, 0.5 * step), t + 0.5 * step, 0.5 * step);
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double scale = options.abs_tol + options.rel_tol * std::max(std::abs(y[i]), std::abs(half[i]));
      err = std::max(err, std::abs(half[i] - full[i]) / 15.0 / scale);
    }
    if (!finite(full) || !finite(half) || !std::isfinite(err) || err > 1.0) {
      const double factor = std::isfinite(err) ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.25;
      dt = step * factor;
      if (dt < options.dt_floor * 1e-6) {
        throw std::runtime_error("integrate_ivp: step size underflow");
      }
      continue;
    }
    for (int i = 0; i < 2; ++i) y[i] = half[i] + (half[i] - full[i]) / 15.0;
    t += step;
    if (tracker.accept(t, step, y)) return tracker.report;
    const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 4.0;
    dt = step * std::clamp(grow, 0.2, 4.0);
  }
  throw std::runtime_error("integrate_ivp: step budget exhausted");
}

OdeBlowupReport run_dopri5(const IvpSpec& spec, const OdeOptions& options) {
  namespace odeint = boost::numeric::odeint;
  const Rhs f{spec.p, spec.q, spec.K1, spec.R};
  auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol,
                                         odeint::runge_kutta_dopri5<OdeState>());
  Tracker tracker{options, {}, spec.t0};
  OdeState y{spec.F0, spec.dF0};
  double t = spec.t0;
  double dt = options.initial_dt;
  tracker.report.t_end = t;
  tracker.report.F_end = y[0];
  for (std::size_t iter = 0; iter < options.max_steps; ++iter) {
    if (t >= spec.horizon) return tracker.report;
    dt = std::min(dt, spec.horizon - t);
    const OdeState saved = y;
    const double t_before = t;
    const auto result = stepper.try_step(f, y, t, dt);
    if (result == odeint::fail) {
      if (dt < options.dt_floor * 1e-6) throw std::runtime_error("integrate_ivp: step size underflow");
      continue;
    }
    if (!finite(y)) {
      y = saved;
      dt = 0.25 * (t - t_before);
      t = t_before;
      continue;
    }
    if (tracker.accept(t, t - t_before, y)) return tracker.report;
  }
  throw std::runtime_error("integrate_ivp: step budget exhausted");
}

}  // namespace

std::string to_string(OdeVerdict verdict) {
  return verdict == OdeVerdict::blew_up ? "blew_up" : "survived";
}

void OdeProblem::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("OdeProblem: " + msg); };
  if (!(p > 1.0)) fail("p must be > 1");
  if (!(a >= 1.0)) fail("a must be >= 1");
  if (!(K0 >= 0.0)) fail("K0 must be >= 0");
  if (!(K1 > 0.0)) fail("K1 must be > 0");
  if (!(R > 0.0)) fail("R must be > 0");
  if (!(T0 >= 0.0)) fail("T0 must be >= 0");
  if (!(horizon > T0)) fail("horizon must exceed T0");
  if (!(std::abs((p - 1.0) * a - (q - 2.0)) < 1e-10)) fail("exponent relation (p-1)a = q-2 violated");
}

OdeBlowupReport integrate_ivp(const IvpSpec& spec, OdeIntegrator integrator,
                              const OdeOptions& options) {
  if (!(spec.p > 1.0)) throw std::invalid_argument("integrate_ivp: p must be > 1");
  if (!(spec.horizon > spec.t0)) throw std::invalid_argument("integrate_ivp: horizon must exceed t0");
  return integrator == OdeIntegrator::dopri5 ? run_dopri5(spec, options) : run_rk4(spec, options);
}

OdeBlowupReport integrate_comparison(const OdeProblem& problem, OdeIntegrator integrator,
                                     const OdeOptions& options) {
  problem.validate();
  IvpSpec spec;
  spec.p = problem.p;
  spec.q = problem.q;
  spec.K1 = problem.K1;
  spec.R = problem.R;
  spec.t0 = problem.T0;
  const double shift = problem.T0 + problem.R;
  spec.F0 = problem.K0 * std::pow(shift, problem.a);
  spec.dF0 = problem.K0 * problem.a * std::pow(shift, problem.a - 1.0);
  spec.horizon = problem.horizon;
  OdeOptions scaled = options;
  // Step sizes scale with T₀+R; keep the first trial step proportionate.
  scaled.initial_dt = options.initial_dt * shift;
  return integrate_ivp(spec, integrator, scaled);
}

OdeProblem rescale(const OdeProblem& problem) {
  problem.validate();
  OdeProblem out = problem;
  out.T0 = 0.0;
  out.R = 1.0;
  out.horizon = rescaled_time(problem, problem.horizon);
  return out;
}

double rescaled_time(const OdeProblem& problem, double t) {
  return (t - problem.T0) / (problem.T0 + problem.R);
}

double envelope_equilibrium(double p, double a, double K1) {
  return std::pow(a * (a - 1.0) / K1, 1.0 / (p - 1.0));
}

ThresholdResult threshold_c0_at(double p, double a, double q, double K1, double R, double T0,
                                double normalized_horizon, OdeIntegrator integrator,
                                double tol) {
  OdeProblem prob;
  prob.p = p;
  prob.a = a;
  prob.q = q;
  prob.K1 = K1;
  prob.R = R;
  prob.T0 = T0;
  prob.horizon = T0 + (T0 + R) * normalized_horizon;
  prob.K0 = 1.0;
  prob.validate();

  ThresholdResult out;
  out.horizon = prob.horizon;
  out.R = R;
  out.T0 = T0;
  auto blows_up = [&](double K0) {
    prob.K0 = K0;
    ++out.integrations;
    return integrate_comparison(prob, integrator).verdict == OdeVerdict::blew_up;
  };

  double guess = a > 1.0 ? envelope_equilibrium(p, a, K1) : 1.0;
  double lower = 0.0, upper = 0.0;
  if (blows_up(guess)) {
    upper = guess;
    lower = guess * 0.5;
    for (int k = 0; k < 80 && blows_up(lower); ++k) {
      upper = lower;
      lower *= 0.5;
      if (k == 79) throw std::runtime_error("threshold_c0: no surviving K0 found");
    }
  } else {
    lower = guess;
    upper = guess * 2.0;
    for (int k = 0; k < 80 && !blows_up(upper); ++k) {
      lower = upper;
      upper *= 2.0;
      if (k == 79) {
        throw std::runtime_error("threshold_c0: horizon too short to separate; no blow-up found");
      }
    }
  }
  while ((upper - lower) / upper > tol) {
    const double mid = std::sqrt(lower * upper);
    if (blows_up(mid)) upper = mid;
    else lower = mid;
  }
  out.lower = lower;
  out.upper = upper;
  out.c0 = upper;
  return out;
}

ThresholdResult threshold_c0(double p, double a, double q, double K1, double horizon,
                             OdeIntegrator integrator, double tol) {
  return threshold_c0_at(p, a, q, K1, 1.0, 0.0, horizon, integrator, tol);
}

InvarianceReport invariance_check(double p, double a, double q, double K1,
                                  std::span<const ShiftPoint> grid, double normalized_horizon,
                                  int jobs, OdeIntegrator integrator) {
  InvarianceReport out;
  out.thresholds.resize(grid.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < grid.size(); i += stride) {
      out.thresholds[i] = threshold_c0_at(p, a, q, K1, grid[i].R, grid[i].T0,
                                          normalized_horizon, integrator);
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::future<void>> tasks;
    for (std::size_t w = 0; w < workers; ++w) tasks.push_back(std::async(std::launch::async, work, w, workers));
    for (auto& task : tasks) task.get();
  }
  if (out.thresholds.empty()) return out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& th : out.thresholds) {
    lo = std::min(lo, th.c0);
    hi = std::max(hi, th.c0);
  }
  out.spread = (hi - lo) / hi;
  return out;
}

}  // namespace critwave
