#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace critwave {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Builds an `order`-point Gauss-Legendre rule by Newton iteration on P_order.
GaussRule gauss_legendre(int order);

/// Cached rule of the given order (orders up to 64).
const GaussRule& cached_gauss_legendre(int order);

/// Integrates `f` over [lo, hi] with `panels` equal panels of `rule`.
template <class F>
double composite_gauss(F&& f, double lo, double hi, int panels,
                       const GaussRule& rule) {
  if (!(hi > lo) || panels <= 0) return 0.0;
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = lo + k * width;
    const double mid = a + 0.5 * width;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    }
    total += 0.5 * width * acc;
  }
  return total;
}

/// Composite trapezoid weights for `count` uniform nodes of spacing `h`.
std::vector<double> trapezoid_weights(std::size_t count, double h);

/// Composite Simpson weights when the interval count is even, trapezoid
/// otherwise.
std::vector<double> simpson_or_trapezoid_weights(std::size_t count, double h);

/// Trapezoid rule over uniformly spaced samples.
double trapezoid(std::span<const double> values, double h);

/// Four-point Lagrange interpolation of uniformly sampled data at `x`.
/// Samples at negative abscissae are mirrored (even extension about 0),
/// samples past the end are treated as zero.
double cubic_interpolate_even(std::span<const double> values, double h,
                              double x);

/// Linear interpolation of uniformly sampled data; zero outside the grid.
double linear_interpolate(std::span<const double> values, double h, double x);

/// Slope and intercept of an ordinary least-squares line.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace critwave
