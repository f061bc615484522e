#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "critwave/criticality.hpp"
#include "critwave/diagnostics.hpp"
#include "critwave/radon.hpp"

using namespace critwave;

namespace {
double gauss(double r) { return std::exp(-r * r); }
double ball(double r) { return r < 1.0 ? 1.0 : 0.0; }
const double kBreak[] = {1.0};
}  // namespace

TEST_SUITE("radon") {

TEST_CASE("gaussian closed form") {
  CHECK(radon_radial(gauss, 4, 0.0, 12.0) == doctest::Approx(5.568328).epsilon(1e-7));
  for (int n : {2, 3, 4, 5, 6}) {
    for (double rho : {0.0, 0.3, 1.0, 2.5}) {
      CHECK(std::abs(radon_radial(gauss, n, rho, 12.0) - std::pow(M_PI, 0.5 * (n - 1)) * gauss(rho)) < 1e-10);
    }
  }
}

TEST_CASE("ball indicator closed form") {
  for (double rho : {0.0, 0.5, 0.9, 0.999, 1.0, 1.5}) {
    const double exact = rho < 1.0 ? 4.0 * M_PI / 3.0 * std::pow(1.0 - rho * rho, 1.5) : 0.0;
    CHECK(std::abs(radon_radial(ball, 4, rho, 3.0, kBreak) - exact) < 1e-12);
  }
}

TEST_CASE("zero, evenness and linearity") {
  CHECK(radon_radial([](double) { return 0.0; }, 4, 0.5, 3.0) == 0.0);
  CHECK(radon_radial(gauss, 4, -0.7, 12.0) == radon_radial(gauss, 4, 0.7, 12.0));
  const auto combo = [](double r) { return 2.0 * gauss(r) - 0.5 * ball(r); };
  const double lhs = radon_radial(combo, 4, 0.4, 12.0, kBreak);
  const double rhs = 2.0 * radon_radial(gauss, 4, 0.4, 12.0, kBreak) - 0.5 * radon_radial(ball, 4, 0.4, 12.0, kBreak);
  CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("grid path matches the callable path on smooth data") {
  const double h = 1.0 / 200.0;
  std::vector<double> field(2401);
  for (std::size_t i = 0; i < field.size(); ++i) field[i] = gauss(i * h);
  for (double rho : {0.0, 0.25, 1.0, 2.0}) {
    CHECK(std::abs(radon_radial(field, h, 4, rho) - std::pow(M_PI, 1.5) * gauss(rho)) < 1e-6);
  }
}

TEST_CASE("sections: support, mass and pointwise agreement") {
  SimulationConfig c;
  c.n = 4;
  c.p = 2.0;
  c.h = 1.0 / 100.0;
  c.t_max = 3.0;
  c.initial_data.amplitude = 2.0;
  const RadialState s0 = make_initial_state(c);
  const RadonSection sec0 = radon_section(s0, RadonKind::of_u);
  for (std::size_t j = 0; j < sec0.values.size(); ++j) {
    if (sec0.rho(j) >= c.initial_data.radius) CHECK(std::abs(sec0.values[j]) < 1e-12);
  }
  const auto sim = simulate(c, {}, {2.0});
  const RadialState& s = sim.snapshots.at(0);
  const RadonSection sec = radon_section(s, RadonKind::of_u);
  CHECK(radon_mass(sec) == doctest::Approx(F0(s)).epsilon(1e-8));
  CHECK(sec.values[37] == doctest::Approx(radon_radial(s.u, s.h, 4, sec.rho(37))));
  RadialState zero = s;
  std::fill(zero.u.begin(), zero.u.end(), 0.0);
  for (double v : radon_section(zero, RadonKind::of_abs_u_pow_p, 2.0).values) CHECK(v == 0.0);
}

TEST_CASE("1-D wave residual on a zero run and bad input") {
  SimulationConfig c;
  c.n = 4;
  c.h = 1.0 / 50.0;
  c.t_max = 1.0;
  c.initial_data.amplitude = 0.0;
  const auto sim = simulate(c, {}, {0.5, 0.5 + 4 * c.h, 0.5 + 8 * c.h});
  std::vector<RadonSection> u, src;
  for (const auto& s : sim.snapshots) {
    u.push_back(radon_section(s, RadonKind::of_u));
    src.push_back(radon_section(s, RadonKind::of_abs_u_pow_p));
  }
  CHECK(check_1d_wave(u, src, c.R).l2 == 0.0);
  std::vector<RadonSection> two(u.begin(), u.begin() + 2);
  CHECK_THROWS_AS(check_1d_wave(two, two, c.R), std::invalid_argument);
}

TEST_CASE("d'Alembert lower bound") {
  const std::vector<double> t{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> lp{1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK(dalembert_lower_bound(t, lp, 0.5, 1.0, 1.0) == 0.0);  // t <= rho + R
  CHECK(dalembert_lower_bound(t, lp, 0.0, 5.0, 1.0) == doctest::Approx(1.0));
  const std::vector<double> z(5, 0.0);
  CHECK(dalembert_lower_bound(t, z, 0.0, 5.0, 1.0) == 0.0);
}

TEST_CASE("power ratio is one on a constructed section") {
  const ExponentSet ex = exponent_set(4, 2.0);
  RadonSection sec;
  sec.n = 4;
  sec.t = 10.0;
  sec.h = 0.01;
  sec.values.resize(1101);
  const double e = ex.n - 0.5 * (ex.n - 1) * ex.p;
  for (std::size_t j = 0; j < sec.values.size(); ++j) {
    const double d = sec.t - sec.rho(j) - 1.0;
    sec.values[j] = d > 0 ? std::pow(d, e) : 0.0;
  }
  for (double rho : {0.0, 3.0, 8.0}) CHECK(power_lower_bound_check(sec, rho, sec.t, 1.0, ex) == doctest::Approx(1.0));
}

}
