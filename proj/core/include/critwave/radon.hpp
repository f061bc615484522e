#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <string>
#include <vector>

#include "critwave/criticality.hpp"
#include "critwave/quadrature.hpp"
#include "critwave/wave_solver.hpp"

namespace critwave {

enum class RadonKind { of_u, of_abs_u, of_abs_u_pow_p };

std::string to_string(RadonKind kind);

/// Radon transform of a radial field on the ρ-grid ρ_j = j·h (the solver grid).
/// Only ρ >= 0 is stored; the transform is even in ρ.
struct RadonSection {
  int n = 0;
  double t = 0.0;
  double h = 0.0;
  double p = 0.0;
  RadonKind kind = RadonKind::of_u;
  std::vector<double> values;

  double rho(std::size_t j) const { return static_cast<double>(j) * h; }
};

/// c_n ∫_ρ^{r_max} f(r)(r²-ρ²)^{(n-3)/2} r dr with c_n = |S^{n-2}|, evaluated
/// after the substitution s = √(r²-ρ²) as c_n ∫ f(√(ρ²+s²)) s^{n-2} ds.
/// `breaks` lists radii where f may lose smoothness; panels never straddle them.
template <std::invocable<double> F>
double radon_radial(F&& f, int n, double rho, double r_max,
                    std::span<const double> breaks = {}) {
  rho = std::abs(rho);
  if (rho >= r_max) return 0.0;
  const double rho2 = rho * rho;
  std::vector<double> cuts{0.0};
  for (double b : breaks) {
    if (b > rho && b < r_max) cuts.push_back(std::sqrt(b * b - rho2));
  }
  cuts.push_back(std::sqrt(r_max * r_max - rho2));
  std::sort(cuts.begin(), cuts.end());
  const GaussRule& rule = cached_gauss_legendre(10);
  auto integrand = [&](double s) {
    return f(std::sqrt(rho2 + s * s)) * (n == 2 ? 1.0 : std::pow(s, n - 2));
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double width = cuts[k + 1] - cuts[k];
    if (!(width > 0.0)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(width / 0.125)));
    total += composite_gauss(integrand, cuts[k], cuts[k + 1], panels, rule);
  }
  return unit_sphere_area(n - 1) * total;
}

/// Radon transform of a grid field (spacing h, even extension at 0) at ρ.
/// The field is interpolated by piecewise cubics; each grid cell is
/// integrated separately in the substituted variable.
double radon_radial(std::span<const double> field, double h, int n, double rho);

/// Pointwise field |u|, u or |u|^p of a state.
std::vector<double> radon_integrand(const RadialState& state, RadonKind kind, double p);

/// Radon transform of the chosen field at every grid node.
RadonSection radon_section(const RadialState& state, RadonKind kind, double p = 2.0);

/// 2∫₀^{r_max} R(ρ) dρ, which equals ∫ f dx.
double radon_mass(const RadonSection& section);

/// Residual ∂²ₜR(u) - ∂²_ρR(u) - R(|u|^p) on the interior time levels.
struct WaveResidual {
  std::vector<double> times;
  std::vector<std::vector<double>> residual;  ///< [time level][ρ node]
  double l2 = 0.0;            ///< L² over ρ <= t + R, root mean square over the levels
  double reference_l2 = 0.0;  ///< same norm of ∂²ₜR(u)
  double relative_l2 = 0.0;   ///< l2 / max(reference_l2, 1e-30)
};

/// Sections of u and of |u|^p at three or more uniformly spaced times.
/// Throws std::invalid_argument on mismatched grids or spacing.
WaveResidual check_1d_wave(std::span<const RadonSection> u_sections,
                           std::span<const RadonSection> source_sections, double R);

/// ½ ∫₀^{(t-ρ-R)/2} Lp(s) ds by the trapezoid rule on the sampled series,
/// linearly interpolated at the upper limit; 0 for an empty range.
double dalembert_lower_bound(std::span<const double> times, std::span<const double> Lp,
                             double rho, double t, double R);

/// R(u)(ρ, t) / (t-ρ-R)^{n-(n-1)p/2}; requires t - ρ - R >= 1.
double power_lower_bound_check(const RadonSection& section, double rho, double t, double R,
                               const ExponentSet& exponents);

}  // namespace critwave
