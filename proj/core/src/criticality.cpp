#include "critwave/criticality.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace critwave {

double gamma_half_integer(int k) {
  if (k < 1) throw std::invalid_argument("gamma_half_integer: k must be >= 1");
  double x = (k % 2 == 0) ? 1.0 : 0.5;
  double g = (k % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  while (x + 0.25 < 0.5 * k) {
    g *= x;
    x += 1.0;
  }
  return g;
}

double unit_ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("unit_ball_volume: n must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / gamma_half_integer(n + 2);
}

double unit_sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("unit_sphere_area: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma_half_integer(n);
}

double critical_exponent(int n) {
  if (n < 2) throw std::invalid_argument("critical_exponent: n must be >= 2");
  const double b = n + 1.0;
  const double lead = n - 1.0;
  // Both terms of the numerator are positive, so no cancellation occurs.
  return (b + std::sqrt(b * b + 8.0 * lead)) / (2.0 * lead);
}

ExponentSet exponent_set(int n, double p) {
  if (n < 2) throw std::invalid_argument("exponent_set: n must be >= 2");
  if (!(p > 1.0)) throw std::invalid_argument("exponent_set: p must be > 1");
  ExponentSet e;
  e.n = n;
  e.p = p;
  e.p_c = critical_exponent(n);
  e.a = n + 1.0 - 0.5 * (n - 1.0) * p;
  e.q = n * (p - 1.0);
  e.K1 = std::pow(unit_ball_volume(n), 1.0 - p);
  e.p_prime = p / (p - 1.0);
  return e;
}

std::vector<NamedResidual> verify_critical_identities(const ExponentSet& e) {
  const double n = e.n;
  const double p = e.p;
  return {
      {"exponent_relation", std::abs((p - 1.0) * e.a - (e.q - 2.0))},
      {"log_weight_identity",
       std::abs(0.5 * (n - 1.0) * p - n * p + 0.5 * (n - 1.0) * p * p - 1.0)},
  };
}

std::vector<NamedResidual> verify_critical_identities(int n) {
  return verify_critical_identities(exponent_set(n, critical_exponent(n)));
}

}  // namespace critwave
