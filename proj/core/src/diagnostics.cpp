#include "critwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "critwave/quadrature.hpp"

namespace critwave {

namespace {

constexpr double kRatioFloor = 1e-30;

double source_power(double u, double p) {
  if (u == 0.0) return 0.0;
  return p == 2.0 ? u * u : std::pow(std::abs(u), p);
}

}  // namespace

DiagnosticsSeries DiagnosticsSeries::truncated(double t_last) const {
  DiagnosticsSeries out;
  out.n = n;
  out.p = p;
  out.R = R;
  for (std::size_t i = 0; i < times.size() && times[i] <= t_last; ++i) {
    out.times.push_back(times[i]);
    out.F0.push_back(F0[i]);
    out.F1.push_back(F1[i]);
    out.Lp.push_back(Lp[i]);
    out.umax.push_back(umax[i]);
  }
  for (const auto& [name, values] : residuals) {
    out.residuals[name].assign(values.begin(),
                               values.begin() + static_cast<long>(std::min(values.size(), out.size())));
  }
  return out;
}

std::vector<double> radial_quadrature_weights(int n, std::size_t count, double h) {
  std::vector<double> w = simpson_or_trapezoid_weights(count, h);
  const double omega = unit_sphere_area(n);
  for (std::size_t i = 0; i < count; ++i) {
    w[i] *= omega * std::pow(static_cast<double>(i) * h, n - 1);
  }
  return w;
}

double F0(const RadialState& state) {
  const auto w = radial_quadrature_weights(state.n, state.size(), state.h);
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) acc += w[i] * state.u[i];
  return acc;
}

double F1(const RadialState& state, const TestFunctionContext& ctx) {
  const auto w = radial_quadrature_weights(state.n, state.size(), state.h);
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.u[i] == 0.0) continue;
    acc += w[i] * state.u[i] * psi1(ctx, state.r(i), state.t);
  }
  return acc;
}

double Lp_integral(const RadialState& state, double p) {
  const auto w = radial_quadrature_weights(state.n, state.size(), state.h);
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) acc += w[i] * source_power(state.u[i], p);
  return acc;
}

double max_abs_u(const RadialState& state) {
  double m = 0.0;
  for (double u : state.u) m = std::max(m, std::abs(u));
  return m;
}

double energy(const RadialState& state, double p) {
  const auto w = radial_quadrature_weights(state.n, state.size(), state.h);
  const std::size_t count = state.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double ur = 0.0;
    if (i > 0 && i + 1 < count) ur = (state.u[i + 1] - state.u[i - 1]) / (2.0 * state.h);
    const double u = state.u[i];
    const double potential = u * source_power(u, p) / (p + 1.0);
    acc += w[i] * (0.5 * state.v[i] * state.v[i] + 0.5 * ur * ur - potential);
  }
  return acc;
}

DataIntegrals data_integrals(const RadialState& initial, const TestFunctionContext& ctx) {
  const auto w = radial_quadrature_weights(initial.n, initial.size(), initial.h);
  DataIntegrals d;
  for (std::size_t i = 0; i < initial.size(); ++i) {
    const double u0 = initial.u[i];
    const double u1 = initial.v[i];
    if (u0 == 0.0 && u1 == 0.0) continue;
    const double phi = phi1(ctx, initial.r(i));
    d.sum_phi1 += w[i] * (u0 + u1) * phi;
    d.u0_phi1 += w[i] * u0 * phi;
  }
  return d;
}

DiagnosticsRecorder::DiagnosticsRecorder(const SimulationConfig& config,
                                         const TestFunctionContext& ctx) {
  if (ctx.n() != config.n) {
    throw std::invalid_argument("DiagnosticsRecorder: context dimension mismatch");
  }
  series_.n = config.n;
  series_.p = config.p;
  series_.R = config.R;
  const std::size_t count = config.node_count();
  weights_ = radial_quadrature_weights(config.n, count, config.h);
  log_phi_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    log_phi_[i] = ctx.log_phi1(static_cast<double>(i) * config.h);
  }
}

void DiagnosticsRecorder::operator()(const RadialState& state) {
  if (state.size() != weights_.size()) {
    throw std::invalid_argument("DiagnosticsRecorder: state grid mismatch");
  }
  double f0 = 0.0, f1 = 0.0, lp = 0.0, m = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double u = state.u[i];
    if (u == 0.0) continue;
    f0 += weights_[i] * u;
    f1 += weights_[i] * u * std::exp(log_phi_[i] - state.t);
    lp += weights_[i] * source_power(u, series_.p);
    m = std::max(m, std::abs(u));
  }
  if (!have_data_) {
    for (std::size_t i = 0; i < state.size(); ++i) {
      const double u0 = state.u[i];
      const double u1 = state.v[i];
      if (u0 == 0.0 && u1 == 0.0) continue;
      const double phi = std::exp(log_phi_[i]);
      data_.sum_phi1 += weights_[i] * (u0 + u1) * phi;
      data_.u0_phi1 += weights_[i] * u0 * phi;
    }
    have_data_ = true;
  }
  series_.times.push_back(state.t);
  series_.F0.push_back(f0);
  series_.F1.push_back(f1);
  series_.Lp.push_back(lp);
  series_.umax.push_back(m);
}

double relative_gap(double lhs, double rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), kRatioFloor});
  return (lhs - rhs) / scale;
}

bool inequality_violated(double lhs, double rhs, double rel_tol, double abs_floor) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return lhs < rhs - (rel_tol * scale + abs_floor);
}

std::vector<double> check_d2F0_identity(const DiagnosticsSeries& series) {
  const std::size_t m = series.size();
  if (m < 3) throw std::invalid_argument("check_d2F0_identity: need at least 3 samples");
  std::vector<double> out(m, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double h1 = series.times[i] - series.times[i - 1];
    const double h2 = series.times[i + 1] - series.times[i];
    if (!(h1 > 0.0 && h2 > 0.0)) {
      throw std::invalid_argument("check_d2F0_identity: times must be increasing");
    }
    const double d2 = 2.0 *
                      ((series.F0[i + 1] - series.F0[i]) / h2 -
                       (series.F0[i] - series.F0[i - 1]) / h1) /
                      (h1 + h2);
    out[i] = std::abs(d2 - series.Lp[i]) / std::max(series.Lp[i], kRatioFloor);
  }
  return out;
}

HolderResiduals check_holder_chain(const DiagnosticsSeries& series,
                                   const ExponentSet& exponents,
                                   std::span<const DenominatorIntegral> I_values) {
  if (I_values.size() != series.size()) {
    throw std::invalid_argument("check_holder_chain: I_values must align with the series");
  }
  const double p = exponents.p;
  HolderResiduals out;
  out.volume_bound.resize(series.size());
  out.test_fn_bound.resize(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times[i];
    const double lhs = series.Lp[i];
    const double volume_rhs =
        exponents.K1 * std::pow(t + series.R, -exponents.q) * std::pow(std::abs(series.F0[i]), p);
    const double I = I_values[i].value;
    const double test_rhs =
        I > 0.0 ? std::pow(std::abs(series.F1[i]), p) / std::pow(I, p - 1.0) : 0.0;
    out.volume_bound[i] = relative_gap(lhs, volume_rhs);
    out.test_fn_bound[i] = relative_gap(lhs, test_rhs);
    if (inequality_violated(lhs, volume_rhs)) ++out.violations;
    if (inequality_violated(lhs, test_rhs)) ++out.violations;
  }
  return out;
}

double lemma22_lower_bound(double t, const DataIntegrals& data) {
  const double decay = std::exp(-2.0 * t);
  return 0.5 * (1.0 - decay) * data.sum_phi1 + decay * data.u0_phi1;
}

std::vector<double> lemma22_margins(const DiagnosticsSeries& series, const DataIntegrals& data) {
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    out[i] = relative_gap(series.F1[i], lemma22_lower_bound(series.times[i], data));
  }
  return out;
}

GrowthWindow default_growth_window(const DiagnosticsSeries& series) {
  if (series.size() == 0) return {};
  const double t_end = series.times.back();
  return {0.3 * t_end, 0.9 * t_end};
}

namespace {

// Relative least-squares misfit of F₀(t+R)^{-e} ≈ K + s ln t; returns (ssr, K, s).
struct JointFit {
  double ssr = 0.0;
  double K = 0.0;
  double s = 0.0;
};

JointFit joint_fit(std::span<const double> logT, std::span<const double> logShift,
                   std::span<const double> logF, double e) {
  double s00 = 0.0, s01 = 0.0, s11 = 0.0, b0 = 0.0, b1 = 0.0;
  const std::size_t m = logT.size();
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = std::exp(logF[i] - e * logShift[i]);
    const double w = 1.0 / (y[i] * y[i]);
    s00 += w;
    s01 += w * logT[i];
    s11 += w * logT[i] * logT[i];
    b0 += w * y[i];
    b1 += w * y[i] * logT[i];
  }
  const double det = s00 * s11 - s01 * s01;
  JointFit fit;
  if (det == 0.0) {
    fit.ssr = std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.K = (b0 * s11 - b1 * s01) / det;
  fit.s = (s00 * b1 - s01 * b0) / det;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = 1.0 - (fit.K + fit.s * logT[i]) / y[i];
    fit.ssr += r * r;
  }
  return fit;
}

}  // namespace

GrowthFit fit_growth(std::span<const double> times, std::span<const double> F0,
                     double R, const ExponentSet& exponents, GrowthWindow window) {
  if (times.size() != F0.size()) throw std::invalid_argument("fit_growth: series length mismatch");
  if (!(window.t_lo > 0.0)) throw std::invalid_argument("fit_growth: window must start at t > 0");
  std::vector<double> logT, logShift, logF, ratio;
  GrowthFit fit;
  fit.window = window;
  fit.K0_estimate = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window.t_lo || t > window.t_hi) continue;
    if (!(F0[i] > 0.0)) throw std::domain_error("fit_growth: F0 must be positive on the window");
    logT.push_back(std::log(t));
    logShift.push_back(std::log(t + R));
    logF.push_back(std::log(F0[i]));
    ratio.push_back(F0[i] / std::pow(t + R, exponents.a));
    fit.K0_estimate = std::min(fit.K0_estimate, ratio.back());
  }
  fit.samples = logT.size();
  if (fit.samples < 10) throw std::invalid_argument("fit_growth: window needs at least 10 samples");

  fit.loglog_slope = least_squares_line(logShift, logF).slope;
  fit.log_factor_slope = least_squares_line(logT, ratio).slope;

  // One-dimensional search over e: coarse scan, then golden section.
  const double lo = fit.loglog_slope - 4.0;
  const double hi = fit.loglog_slope + 4.0;
  constexpr int kScan = 400;
  double best_e = lo;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kScan; ++k) {
    const double e = lo + (hi - lo) * k / kScan;
    const double ssr = joint_fit(logT, logShift, logF, e).ssr;
    if (ssr < best) {
      best = ssr;
      best_e = e;
    }
  }
  const double step = (hi - lo) / kScan;
  double a = best_e - step;
  double b = best_e + step;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - golden * (b - a);
  double d = a + golden * (b - a);
  double fc = joint_fit(logT, logShift, logF, c).ssr;
  double fd = joint_fit(logT, logShift, logF, d).ssr;
  for (int iter = 0; iter < 200 && (b - a) > 1e-13; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - golden * (b - a);
      fc = joint_fit(logT, logShift, logF, c).ssr;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + golden * (b - a);
      fd = joint_fit(logT, logShift, logF, d).ssr;
    }
  }
  fit.fitted_exponent = 0.5 * (a + b);
  return fit;
}

GrowthFit fit_growth(const DiagnosticsSeries& series, const ExponentSet& exponents,
                     GrowthWindow window) {
  return fit_growth(series.times, series.F0, series.R, exponents, window);
}

}  // namespace critwave
