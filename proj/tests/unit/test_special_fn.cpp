#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "critwave/criticality.hpp"
#include "critwave/special_fn.hpp"

using namespace critwave;

TEST_SUITE("special_fn") {

TEST_CASE("phi1 at the origin is the sphere area") {
  for (int n = 2; n <= 8; ++n) {
    const TestFunctionContext ctx(n);
    CHECK(phi1(ctx, 0.0) == doctest::Approx(unit_sphere_area(n)).epsilon(1e-12));
  }
}

TEST_CASE("three-dimensional closed form") {
  const TestFunctionContext ctx(3);
  for (double r : {1e-6, 0.1, 1.0, 7.5, 30.0, 50.0, 300.0}) {
    CHECK(phi1(ctx, r) == doctest::Approx(4.0 * M_PI * std::sinh(r) / r).epsilon(1e-10));
  }
}

TEST_CASE("two-dimensional closed form 2 pi I0(r)") {
  const TestFunctionContext ctx(2);
  for (double r : {0.5, 2.0, 10.0}) {
    CHECK(phi1(ctx, r) == doctest::Approx(2.0 * M_PI * std::cyl_bessel_i(0.0, r)).epsilon(1e-10));
  }
}

TEST_CASE("asymptotics approach one and overflow guards") {
  const TestFunctionContext ctx(4);
  const double r40 = phi1(ctx, 40.0) / phi1_asymptotic(4, 40.0);
  const double r400 = phi1(ctx, 400.0) / phi1_asymptotic(4, 400.0);
  CHECK(std::abs(r400 - 1.0) < std::abs(r40 - 1.0));
  CHECK(std::abs(r400 - 1.0) < 2e-3);
  CHECK_THROWS_AS(phi1(ctx, 701.0), std::range_error);
  CHECK_THROWS_AS(phi1(ctx, -1.0), std::invalid_argument);
  CHECK(std::isfinite(ctx.log_phi1(5000.0)));
}

TEST_CASE("psi1 decays along the characteristic shift") {
  const TestFunctionContext ctx(4);
  CHECK(psi1(ctx, 3.0, 2.0) == doctest::Approx(phi1(ctx, 3.0) * std::exp(-2.0)));
  CHECK(std::isfinite(psi1(ctx, 900.0, 899.0)));
  CHECK_THROWS_AS(psi1(ctx, 800.0, 0.0), std::range_error);
}

TEST_CASE("radial log integral of a constant is the ball volume") {
  const double v = radial_log_integral(4, 1.0, [](double) { return 0.0; });
  CHECK(v == doctest::Approx(unit_ball_volume(4)).epsilon(1e-10));
  const double z = radial_log_integral(4, 1.0, [](double) { return -std::numeric_limits<double>::infinity(); });
  CHECK(z == 0.0);
}

TEST_CASE("I(t) stays bounded after normalization") {
  const TestFunctionContext ctx(4);
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.5 * k);
  const auto series = I_series(ctx, 2.0, 1.0, times);
  REQUIRE(series.size() == times.size());
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(series[i].value == doctest::Approx(I_integral(ctx, 2.0, 1.0, times[i]).value).epsilon(1e-9));
    if (times[i] >= 2.0) {
      lo = std::min(lo, series[i].normalized);
      hi = std::max(hi, series[i].normalized);
    }
  }
  CHECK(hi / lo < 3.0);
}

}
