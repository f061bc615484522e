#include "critwave/quadrature.hpp"

#include <array>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace critwave {

namespace {

// Returns (P_order(x), P_order'(x)).
std::pair<double, double> legendre_with_derivative(int order, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= order; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, order * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  if (order == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < order / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_with_derivative(order, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) {
    const double dp = legendre_with_derivative(order, 0.0).second;
    rule.weights[order / 2] = 2.0 / (dp * dp);
  }
  return rule;
}

const GaussRule& cached_gauss_legendre(int order) {
  static std::array<GaussRule, 65> cache;
  static std::array<std::once_flag, 65> flags;
  if (order < 1 || order > 64) {
    throw std::invalid_argument("cached_gauss_legendre: order out of range");
  }
  std::call_once(flags[order], [order] { cache[order] = gauss_legendre(order); });
  return cache[order];
}

std::vector<double> trapezoid_weights(std::size_t count, double h) {
  std::vector<double> w(count, h);
  if (count == 0) return w;
  if (count == 1) {
    w[0] = 0.0;
    return w;
  }
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

std::vector<double> simpson_or_trapezoid_weights(std::size_t count, double h) {
  if (count < 3 || (count - 1) % 2 != 0) return trapezoid_weights(count, h);
  std::vector<double> w(count);
  for (std::size_t i = 0; i < count; ++i) {
    w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  }
  w.front() = h / 3.0;
  w.back() = h / 3.0;
  return w;
}

double trapezoid(std::span<const double> values, double h) {
  if (values.size() < 2) return 0.0;
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc * h;
}

namespace {

double sample_even(std::span<const double> values, long i) {
  if (i < 0) i = -i;
  if (i >= static_cast<long>(values.size())) return 0.0;
  return values[static_cast<std::size_t>(i)];
}

}  // namespace

double cubic_interpolate_even(std::span<const double> values, double h,
                              double x) {
  if (x < 0.0) x = -x;
  const double s = x / h;
  const long i = static_cast<long>(std::floor(s));
  if (i >= static_cast<long>(values.size())) return 0.0;
  const double f = s - static_cast<double>(i);
  const double ym1 = sample_even(values, i - 1);
  const double y0 = sample_even(values, i);
  const double y1 = sample_even(values, i + 1);
  const double y2 = sample_even(values, i + 2);
  // Lagrange basis on nodes -1, 0, 1, 2.
  const double lm1 = -f * (f - 1.0) * (f - 2.0) / 6.0;
  const double l0 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
  const double l1 = -(f + 1.0) * f * (f - 2.0) / 2.0;
  const double l2 = (f + 1.0) * f * (f - 1.0) / 6.0;
  return lm1 * ym1 + l0 * y0 + l1 * y1 + l2 * y2;
}

double linear_interpolate(std::span<const double> values, double h, double x) {
  if (values.empty() || x < 0.0) return 0.0;
  const double s = x / h;
  const auto i = static_cast<std::size_t>(std::floor(s));
  if (i + 1 >= values.size()) {
    return (i + 1 == values.size() && s - static_cast<double>(i) < 1e-12)
               ? values.back()
               : 0.0;
  }
  const double f = s - static_cast<double>(i);
  return (1.0 - f) * values[i] + f * values[i + 1];
}

LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("least_squares_line: need >= 2 paired samples");
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace critwave
