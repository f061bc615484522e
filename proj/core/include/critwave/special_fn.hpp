#pragma once

#include <functional>
#include <span>
#include <vector>

#include "critwave/quadrature.hpp"

namespace critwave {

/// Precomputed angular quadrature for the spherical test function
///   φ₁(x) = ∫_{S^{n-1}} e^{x·ω} dω,
/// which reduces radially to |S^{n-2}| ∫₀^π e^{r cos θ} sin^{n-2}θ dθ.
class TestFunctionContext {
 public:
  explicit TestFunctionContext(int n, int quadrature_nodes = 256);

  int n() const { return n_; }
  int quadrature_nodes() const { return quadrature_nodes_; }
  /// |S^{n-1}|, the area of the unit sphere in R^n.
  double sphere_area() const { return sphere_area_; }
  /// |S^{n-2}|, the measure of the cross-section sphere.
  double cross_section_area() const { return cross_section_area_; }

  /// log φ₁(r); valid for every r >= 0 (no overflow guard).
  double log_phi1(double r) const;

 private:
  // ∫₀^π e^{r(cos θ - 1)} sin^{n-2}θ dθ, bounded by π for every r.
  double scaled_angular_integral(double r) const;

  int n_;
  int quadrature_nodes_;
  double sphere_area_;
  double cross_section_area_;
  const GaussRule* rule_;
};

/// Largest r for which e^r is evaluated directly.
inline constexpr double kExpGuard = 700.0;
/// Above this radius φ₁ and ψ₁ are evaluated in the log domain.
inline constexpr double kLogDomainRadius = 100.0;

/// φ₁(r); throws std::range_error for r > 700 and std::invalid_argument for r < 0.
double phi1(const TestFunctionContext& ctx, double r);

/// Leading asymptotic (2π)^{(n-1)/2} r^{-(n-1)/2} e^r.
double phi1_asymptotic(int n, double r);

/// ψ₁(r, t) = φ₁(r) e^{-t}; throws std::range_error if r - t > 700.
double psi1(const TestFunctionContext& ctx, double r, double t);

/// ω_{n-1} ∫₀^upper exp(log_f(r)) r^{n-1} dr, accumulated in the log domain.
/// A log_f of -infinity denotes a zero integrand.
double radial_log_integral(int n, double upper,
                           const std::function<double(double)>& log_f);

/// I(t) = ∫_{|x| <= t+R} ψ₁(x, t)^{p'} dx together with the bound-normalized
/// value I(t) e^{-p'R} (t+R)^{-(n-1-(n-1)p'/2)}.
struct DenominatorIntegral {
  double t = 0.0;
  double value = 0.0;
  double normalized = 0.0;
};

DenominatorIntegral I_integral(const TestFunctionContext& ctx, double p,
                               double R, double t);

/// I(t) at a nondecreasing sequence of times; the radial integral is
/// accumulated incrementally since only the upper limit depends on t.
std::vector<DenominatorIntegral> I_series(const TestFunctionContext& ctx,
                                          double p, double R,
                                          std::span<const double> times);

}  // namespace critwave
