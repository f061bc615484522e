#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include "critwave/criticality.hpp"
#include "critwave/quadrature.hpp"
#include "critwave/radon.hpp"
#include "critwave/wave_solver.hpp"

namespace critwave {

/// Field on the uniform grid x_i = i·h of [0, t+R], extended by zero to the
/// whole line and linearly interpolated between nodes.
struct LineField {
  int n = 0;
  double t = 0.0;
  double R = 0.0;
  double h = 0.0;
  std::vector<double> values;

  double length() const { return t + R; }
  double x(std::size_t i) const { return static_cast<double>(i) * h; }
};

/// Samples `f` at `nodes` equally spaced points of [0, t+R].
template <class F>
LineField make_line_field(int n, double t, double R, std::size_t nodes, F&& f) {
  LineField field;
  field.n = n;
  field.t = t;
  field.R = R;
  field.h = (t + R) / static_cast<double>(nodes - 1);
  field.values.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) field.values[i] = f(field.x(i));
  return field;
}

/// T(f)(ρ) = (L-ρ)^{-(n-1)/2} ∫_ρ^L f(r)(r-ρ)^{(n-3)/2} dr with L = t+R,
/// evaluated as (L-ρ)^{-(n-1)/2} · 2∫₀^{√(L-ρ)} f(ρ+s²) s^{n-2} ds.
/// At ρ = L the limit 2f(L)/(n-1) is returned.
template <std::invocable<double> F>
double transform_T(F&& f, int n, double L, double rho, std::span<const double> breaks = {}) {
  const double span = L - rho;
  if (span < 0.0) return 0.0;
  if (span <= 1e-14 * std::max(1.0, L)) return 2.0 * f(L) / (n - 1.0);
  std::vector<double> cuts{0.0};
  for (double b : breaks) {
    if (b > rho && b < L) cuts.push_back(std::sqrt(b - rho));
  }
  const double s_max = std::sqrt(span);
  cuts.push_back(s_max);
  std::sort(cuts.begin(), cuts.end());
  const GaussRule& rule = cached_gauss_legendre(10);
  auto integrand = [&](double s) {
    return f(rho + s * s) * (n == 2 ? 1.0 : std::pow(s, n - 2));
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double width = cuts[k + 1] - cuts[k];
    if (!(width > 0.0)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(width / (0.125 * s_max))));
    total += composite_gauss(integrand, cuts[k], cuts[k + 1], panels, rule);
  }
  return 2.0 * total * std::pow(span, -0.5 * (n - 1.0));
}

/// T of the linearly interpolated field at an arbitrary ρ in [0, t+R].
double transform_T(const LineField& f, double rho);

/// T at every node, by exact product integration of the hat functions against
/// the kernel (translation-invariant weights, O(N²)).
std::vector<double> transform_T_all(const LineField& f);

/// Centered discrete Hardy–Littlewood maximal function of |f| at x: the
/// supremum of (1/2r)∫_{x-r}^{x+r}|f| over radii r = k·h (k >= 1) together
/// with the r → 0 limit |f(x)|.
double maximal_function(const LineField& f, double x);

/// maximal_function at every node, O(N²) with prefix sums.
std::vector<double> maximal_function_all(const LineField& f);

/// 2M(|f|)(x_j) - |T(f)(x_j)| at every node.
std::vector<double> check_pointwise_domination(const LineField& f);

/// ‖T f‖_p / ‖f‖_p over [0, t+R]; throws std::invalid_argument for ‖f‖_p = 0.
double lp_operator_ratio(const LineField& f, double p);

/// Seeded random nonnegative field: a few boxes and smooth bumps with centres
/// uniform in [0, t+R] and widths log-uniform in [1, t+R].
LineField random_nonneg_field(std::uint64_t seed, int n, double t, double R, std::size_t nodes);

struct RatioSample {
  std::uint64_t seed = 0;
  double t = 0.0;
  double ratio = 0.0;
};

/// lp_operator_ratio over every (seed, t) pair; independent fields may be
/// evaluated on up to `jobs` threads.
std::vector<RatioSample> operator_ratio_sweep(std::span<const std::uint64_t> seeds,
                                              std::span<const double> times, int n, double p,
                                              double R, std::size_t nodes, int jobs = 1);

/// f(r) = |u(r,t)| r^{(n-1)/p} on [0, t+R] sampled on the state grid.
LineField weighted_profile(const RadialState& state, double R, double p);

struct WeightedInequality {
  double lhs = 0.0;  ///< ∫₀^{t+R} R(|u|)^p (t-ρ+R)^{-(n-1)p/2} ρ^{n-1-(n-1)p/2} dρ
  double rhs = 0.0;  ///< ∫ |u|^p dx
};

/// Throws std::domain_error for n < 4 (the ρ-weight step needs p <= 2).
WeightedInequality weighted_inequality_check(const RadonSection& radon_abs_u,
                                             const RadialState& state,
                                             const ExponentSet& exponents, double R);

/// Lp(t) / [(t-R)^{n-1-(n-1)p/2} ln((t-R)/2)] for every sample with
/// t > 2(R+1)+1. Throws std::domain_error for n < 4 and
/// std::invalid_argument when no sample qualifies.
struct LogRefinementMargins {
  std::vector<double> times;
  std::vector<double> margin;
};

LogRefinementMargins log_refinement_check(std::span<const double> times,
                                          std::span<const double> Lp,
                                          const ExponentSet& exponents, double R);

/// Constant with t-ρ+R <= c_R (t-ρ-R) for ρ in (0, t-R-1); attained at
/// ρ = t-R-1.
double refinement_constant_cR(double R);

}  // namespace critwave
