#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "critwave/criticality.hpp"
#include "critwave/special_fn.hpp"
#include "critwave/wave_solver.hpp"

namespace critwave {

/// Time series of the integral functionals along one run.
struct DiagnosticsSeries {
  int n = 0;
  double p = 0.0;
  double R = 0.0;
  std::vector<double> times;
  std::vector<double> F0;    ///< ∫ u dx
  std::vector<double> F1;    ///< ∫ u ψ₁ dx
  std::vector<double> Lp;    ///< ∫ |u|^p dx
  std::vector<double> umax;  ///< max |u|
  std::map<std::string, std::vector<double>> residuals;

  std::size_t size() const { return times.size(); }
  /// Copy restricted to the samples with times <= t_last.
  DiagnosticsSeries truncated(double t_last) const;
};

/// Weights ω_{n-1} r_i^{n-1} w_i of the radial grid quadrature (Simpson when
/// the interval count is even, trapezoid otherwise).
std::vector<double> radial_quadrature_weights(int n, std::size_t count, double h);

double F0(const RadialState& state);
double F1(const RadialState& state, const TestFunctionContext& ctx);
double Lp_integral(const RadialState& state, double p);
double max_abs_u(const RadialState& state);
/// ∫ (v²/2 + u_r²/2 - u|u|^p/(p+1)) dx.
double energy(const RadialState& state, double p);

/// Data integrals entering the lower bound for F₁.
struct DataIntegrals {
  double sum_phi1 = 0.0;  ///< ∫ (u₀ + u₁) φ₁ dx
  double u0_phi1 = 0.0;   ///< ∫ u₀ φ₁ dx
};

DataIntegrals data_integrals(const RadialState& initial, const TestFunctionContext& ctx);

/// Observer accumulating a DiagnosticsSeries with weights and φ₁ cached on
/// the solver grid.
class DiagnosticsRecorder {
 public:
  DiagnosticsRecorder(const SimulationConfig& config, const TestFunctionContext& ctx);

  void operator()(const RadialState& state);

  const DiagnosticsSeries& series() const { return series_; }
  /// Data integrals taken from the first observed state.
  const DataIntegrals& data() const { return data_; }

 private:
  DiagnosticsSeries series_;
  std::vector<double> weights_;
  std::vector<double> log_phi_;
  DataIntegrals data_;
  bool have_data_ = false;
};

/// Relative gap (lhs - rhs) / max(|lhs|, |rhs|, 1e-30).
double relative_gap(double lhs, double rhs);

/// True when lhs < rhs - (1e-8·max(|lhs|, |rhs|) + 1e-12).
bool inequality_violated(double lhs, double rhs, double rel_tol = 1e-8,
                         double abs_floor = 1e-12);

/// |D²F₀ - Lp| / max(Lp, 1e-30) with D² the three-point second difference
/// (exact for quadratics on uneven spacing); the two end samples are NaN.
/// Throws std::invalid_argument for fewer than 3 samples or times that do
/// not increase.
std::vector<double> check_d2F0_identity(const DiagnosticsSeries& series);

struct HolderResiduals {
  std::vector<double> volume_bound;     ///< relative gap of Lp ≥ K₁(t+R)^{-q}|F₀|^p
  std::vector<double> test_fn_bound;    ///< relative gap of Lp ≥ |F₁|^p / I^{p-1}
  std::size_t violations = 0;
};

HolderResiduals check_holder_chain(const DiagnosticsSeries& series,
                                   const ExponentSet& exponents,
                                   std::span<const DenominatorIntegral> I_values);

/// ½(1 - e^{-2t}) ∫(u₀+u₁)φ₁ + e^{-2t} ∫u₀φ₁.
double lemma22_lower_bound(double t, const DataIntegrals& data);

/// Relative gap of F₁(t) over the lower bound at every sample.
std::vector<double> lemma22_margins(const DiagnosticsSeries& series, const DataIntegrals& data);

struct GrowthWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// [0.3·t_end, 0.9·t_end] of the series.
GrowthWindow default_growth_window(const DiagnosticsSeries& series);

struct GrowthFit {
  GrowthWindow window;
  std::size_t samples = 0;
  /// Exponent e of the joint model F₀ ≈ (t+R)^e (K + s ln t).
  double fitted_exponent = 0.0;
  /// Plain slope of log F₀ against log(t+R).
  double loglog_slope = 0.0;
  /// Slope of F₀/(t+R)^a against ln t, with a from the exponent set.
  double log_factor_slope = 0.0;
  /// inf over the window of F₀/(t+R)^a.
  double K0_estimate = 0.0;
};

/// Throws std::invalid_argument for fewer than 10 samples in the window or a
/// window reaching t <= 0, and std::domain_error for nonpositive F₀.
GrowthFit fit_growth(std::span<const double> times, std::span<const double> F0,
                     double R, const ExponentSet& exponents, GrowthWindow window);

GrowthFit fit_growth(const DiagnosticsSeries& series, const ExponentSet& exponents,
                     GrowthWindow window);

struct ResidualSummary {
  double min = 0.0;
  double max = 0.0;
  std::size_t violations = 0;
  std::size_t samples = 0;
};

/// Summary over the finite entries; `violates` decides each entry.
template <class Pred>
ResidualSummary summarize(std::span<const double> values, Pred violates) {
  ResidualSummary s;
  bool first = true;
  for (double v : values) {
    if (!(v == v)) continue;
    if (first) {
      s.min = s.max = v;
      first = false;
    }
    s.min = v < s.min ? v : s.min;
    s.max = v > s.max ? v : s.max;
    ++s.samples;
    if (violates(v)) ++s.violations;
  }
  return s;
}

}  // namespace critwave
