#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "critwave/criticality.hpp"

using namespace critwave;

TEST_SUITE("criticality") {

TEST_CASE("critical exponents") {
  CHECK(critical_exponent(4) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(critical_exponent(3) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(critical_exponent(2) == doctest::Approx(0.5 * (3.0 + std::sqrt(17.0))).epsilon(1e-15));
  CHECK_THROWS_AS(critical_exponent(1), std::invalid_argument);
  for (int n = 2; n < 20; ++n) CHECK(critical_exponent(n + 1) < critical_exponent(n));
}

TEST_CASE("quadratic root") {
  for (int n = 2; n <= 12; ++n) {
    const double p = critical_exponent(n);
    CHECK(std::abs((n - 1) * p * p - (n + 1) * p - 2.0) < 1e-12);
  }
}

TEST_CASE("derived exponents at n = 4, p = 2") {
  const ExponentSet e = exponent_set(4, 2.0);
  CHECK(e.a == 2.0);
  CHECK(e.q == 4.0);
  CHECK(e.p_prime == 2.0);
  CHECK(e.K1 == doctest::Approx(2.0 / (M_PI * M_PI)));
  CHECK(e.K1 == doctest::Approx(0.202642).epsilon(1e-6));
  CHECK_THROWS_AS(exponent_set(4, 1.0), std::invalid_argument);
}

TEST_CASE("identities hold at p_c and fail away from it") {
  for (int n = 2; n <= 12; ++n) {
    for (const auto& r : verify_critical_identities(n)) CHECK(std::abs(r.value) < 1e-12);
  }
  const auto off = verify_critical_identities(exponent_set(4, 1.8));
  CHECK(std::abs(off[1].value) > 1e-3);
}

TEST_CASE("ball and sphere measures") {
  CHECK(unit_sphere_area(1) == 2.0);
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * M_PI));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI));
  CHECK(unit_ball_volume(4) == doctest::Approx(M_PI * M_PI / 2.0));
  CHECK(gamma_half_integer(1) == doctest::Approx(std::sqrt(M_PI)));
  CHECK(gamma_half_integer(7) == doctest::Approx(std::tgamma(3.5)));
}

}
