#pragma once

#include <string>
#include <vector>

namespace critwave {

/// Exponents of the focusing problem u_tt - Δu = |u|^p in n space dimensions.
struct ExponentSet {
  int n = 0;
  double p = 0.0;
  double p_c = 0.0;      ///< Positive root of (n-1)p^2 - (n+1)p - 2 = 0.
  double a = 0.0;        ///< Growth exponent n + 1 - (n-1)p/2.
  double q = 0.0;        ///< Weight exponent n(p-1).
  double K1 = 0.0;       ///< Hölder constant vol(B^n)^(1-p).
  double p_prime = 0.0;  ///< Conjugate exponent p/(p-1).
};

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

/// Γ(k/2) for positive integers k, via Γ(1/2) = √π, Γ(1) = 1 and Γ(x+1) = xΓ(x).
double gamma_half_integer(int k);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Surface area of the unit sphere S^(n-1) ⊂ R^n; |S^0| = 2.
double unit_sphere_area(int n);

/// Critical exponent p_c(n); throws std::invalid_argument for n < 2.
double critical_exponent(int n);

/// Derived parameters at exponent p; throws std::invalid_argument for
/// n < 2 or p <= 1.
ExponentSet exponent_set(int n, double p);

/// Absolute residuals of the two identities that hold at p = p_c:
///   (p-1)a = q-2   and   (n-1)p/2 - np + (n-1)p^2/2 = 1.
std::vector<NamedResidual> verify_critical_identities(const ExponentSet& e);
std::vector<NamedResidual> verify_critical_identities(int n);

}  // namespace critwave
