#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace critwave {

/// Comparison problem F'' = K₁(t+R)^{-q} F^p on [T₀, horizon], started on the
/// envelope: F(T₀) = K₀(T₀+R)^a, F'(T₀) = K₀ a (T₀+R)^{a-1}.
struct OdeProblem {
  double p = 2.0;
  double a = 2.0;
  double q = 4.0;
  double K0 = 1.0;
  double K1 = 1.0;
  double R = 1.0;
  double T0 = 1.0;
  double horizon = 1e4;

  /// Throws std::invalid_argument unless p > 1, a >= 1, K₀ >= 0, K₁ > 0,
  /// R > 0, T₀ >= 0, horizon > T₀ and |(p-1)a - (q-2)| < 1e-10.
  void validate() const;
};

/// Unconstrained initial-value problem F'' = K₁(t+R)^{-q}|F|^p.
struct IvpSpec {
  double p = 2.0;
  double q = 0.0;
  double K1 = 1.0;
  double R = 0.0;
  double t0 = 0.0;
  double F0 = 1.0;
  double dF0 = 0.0;
  double horizon = 10.0;
};

enum class OdeVerdict { blew_up, survived };

std::string to_string(OdeVerdict verdict);

struct OdeBlowupReport {
  OdeVerdict verdict = OdeVerdict::survived;
  std::optional<double> t_blowup;       ///< present iff blew_up
  std::optional<double> t_blowup_lower; ///< previous accepted step
  double min_dt = 0.0;
  std::size_t samples = 0;              ///< accepted steps
  std::optional<double> c0_estimate;
  double t_end = 0.0;
  double F_end = 0.0;
};

enum class OdeIntegrator {
  rk4_step_doubling,  ///< classical RK4, error from step doubling
  dopri5,             ///< Dormand–Prince 5(4) with embedded error control
};

struct OdeOptions {
  double blowup_value = 1e12;  ///< F above this ...
  double dt_floor = 1e-10;     ///< ... with the step below this declares blow-up
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_dt = 1e-3;
  std::size_t max_steps = 20'000'000;
};

OdeBlowupReport integrate_ivp(const IvpSpec& spec,
                              OdeIntegrator integrator = OdeIntegrator::rk4_step_doubling,
                              const OdeOptions& options = {});

/// Integrates the comparison problem; throws std::invalid_argument when the
/// exponent relation (p-1)a = q-2 fails.
OdeBlowupReport integrate_comparison(const OdeProblem& problem,
                                     OdeIntegrator integrator = OdeIntegrator::rk4_step_doubling,
                                     const OdeOptions& options = {});

/// Translation τ = t - T₀ followed by τ = (T₀+R)s and G_R = (T₀+R)^{-a}G:
/// the result has T₀ = 0, R = 1 and horizon (horizon - T₀)/(T₀+R), with K₀
/// and K₁ unchanged.
OdeProblem rescale(const OdeProblem& problem);

/// Maps a time of the original problem to the normalized variable s.
double rescaled_time(const OdeProblem& problem, double t);

/// The fixed point (a(a-1)/K₁)^{1/(p-1)} of the autonomous form
/// g'' + (2a-1)g' + a(a-1)g = K₁g^p obtained with F = (t+R)^a g(ln(t+R)).
double envelope_equilibrium(double p, double a, double K1);

struct ThresholdResult {
  double c0 = 0.0;  ///< upper end of the closed bracket (blows up)
  double lower = 0.0;  ///< survives
  double upper = 0.0;  ///< blows up
  double horizon = 0.0;
  double R = 1.0;
  double T0 = 0.0;
  std::size_t integrations = 0;
};

/// Bisection on K₀ for the normalized problem until (upper-lower)/upper <= tol.
/// Throws std::runtime_error when no bracket can be found.
ThresholdResult threshold_c0(double p, double a, double q, double K1, double horizon,
                             OdeIntegrator integrator = OdeIntegrator::rk4_step_doubling,
                             double tol = 0.01);

/// Same bisection on the original (R, T₀) problem; the original horizon is
/// T₀ + (T₀+R)·normalized_horizon so that it maps onto the normalized one.
ThresholdResult threshold_c0_at(double p, double a, double q, double K1, double R, double T0,
                                double normalized_horizon,
                                OdeIntegrator integrator = OdeIntegrator::rk4_step_doubling,
                                double tol = 0.01);

struct ShiftPoint {
  double R = 1.0;
  double T0 = 1.0;
};

struct InvarianceReport {
  std::vector<ThresholdResult> thresholds;
  double spread = 0.0;  ///< (max c₀ - min c₀) / max c₀
};

/// Thresholds over the (R, T₀) grid, computed concurrently on up to `jobs` threads.
InvarianceReport invariance_check(double p, double a, double q, double K1,
                                  std::span<const ShiftPoint> grid,
                                  double normalized_horizon = 1e4, int jobs = 1,
                                  OdeIntegrator integrator = OdeIntegrator::rk4_step_doubling);

}  // namespace critwave
