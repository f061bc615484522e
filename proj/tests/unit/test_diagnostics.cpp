#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "critwave/criticality.hpp"
#include "critwave/diagnostics.hpp"
#include "critwave/quadrature.hpp"
#include "critwave/special_fn.hpp"

using namespace critwave;

namespace {

RadialState radial_state(int n, double h, double r_end, const std::function<double(double)>& f) {
  RadialState s;
  s.n = n;
  s.h = h;
  auto count = static_cast<std::size_t>(std::llround(r_end / h)) + 1;
  if (count % 2 == 0) ++count;
  s.u.resize(count);
  s.v.assign(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) s.u[i] = f(s.r(i));
  return s;
}

double bump(double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

DiagnosticsSeries synthetic_series(const std::function<double(double)>& F0_of_t, double t0, double t1,
                                   std::size_t m) {
  DiagnosticsSeries s;
  s.n = 4;
  s.p = 2.0;
  s.R = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = t0 + (t1 - t0) * i / (m - 1.0);
    s.times.push_back(t);
    s.F0.push_back(F0_of_t(t));
    s.F1.push_back(0.0);
    s.Lp.push_back(0.0);
    s.umax.push_back(0.0);
  }
  return s;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("functionals of the zero state vanish exactly") {
  const RadialState z = radial_state(4, 0.01, 2.0, [](double) { return 0.0; });
  const TestFunctionContext ctx(4);
  CHECK(F0(z) == 0.0);
  CHECK(F1(z, ctx) == 0.0);
  CHECK(Lp_integral(z, 2.0) == 0.0);
  CHECK(max_abs_u(z) == 0.0);
}

TEST_CASE("indicator of the unit ball in four dimensions") {
  // The jump node carries the mean of the one-sided values; with 0 or 1 there
  // Simpson is off by ±|S³|h/3.
  const RadialState s = radial_state(4, 1e-3, 2.0, [](double r) {
    if (std::abs(r - 1.0) < 1e-9) return 0.5;
    return r < 1.0 ? 1.0 : 0.0;
  });
  CHECK(std::abs(F0(s) - M_PI * M_PI / 2.0) < 1e-4 * 5.0);
  CHECK(F0(s) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-3));
}

TEST_CASE("bump integrals against a refined oracle") {
  const RadialState s = radial_state(3, 1.0 / 400.0, 2.0, bump);
  const double oracle =
      4.0 * M_PI * composite_gauss([](double r) { return bump(r) * r * r; }, 0.0, 1.0, 64, cached_gauss_legendre(16));
  CHECK(std::abs(F0(s) - oracle) < 1e-6);
  const TestFunctionContext ctx(3);
  const double oracle1 = 16.0 * M_PI * M_PI *
                         composite_gauss([](double r) { return bump(r) * r * r * (r > 0 ? std::sinh(r) / r : 1.0); },
                                         0.0, 1.0, 64, cached_gauss_legendre(16));
  CHECK(std::abs(F1(s, ctx) - oracle1) < 1e-6);
}

TEST_CASE("F1 of a small plateau is phi1(0) times its volume") {
  const double eps = 0.05;
  const RadialState s = radial_state(4, 1e-4, 0.1, [&](double r) { return r < eps ? 1.0 : 0.0; });
  const TestFunctionContext ctx(4);
  const double expected = phi1(ctx, 0.0) * unit_ball_volume(4) * std::pow(eps, 4);
  CHECK(F1(s, ctx) == doctest::Approx(expected).epsilon(1e-2));
}

TEST_CASE("second-derivative identity") {
  DiagnosticsSeries s = synthetic_series([](double t) { return t * t; }, 0.0, 2.0, 21);
  for (auto& v : s.Lp) v = 2.0;
  const auto res = check_d2F0_identity(s);
  CHECK(std::isnan(res.front()));
  CHECK(std::isnan(res.back()));
  for (std::size_t i = 1; i + 1 < res.size(); ++i) CHECK(res[i] < 1e-10);
  DiagnosticsSeries zero = synthetic_series([](double) { return 0.0; }, 0.0, 1.0, 5);
  for (std::size_t i = 1; i + 1 < 5; ++i) CHECK(check_d2F0_identity(zero)[i] == 0.0);
  CHECK_THROWS_AS(check_d2F0_identity(synthetic_series([](double t) { return t; }, 0.0, 1.0, 2)),
                  std::invalid_argument);
}

TEST_CASE("holder volume bound is sharp for constants on the cone") {
  const ExponentSet ex = exponent_set(4, 2.0);
  const double c = 0.7;
  DiagnosticsSeries s = synthetic_series([](double) { return 0.0; }, 0.0, 5.0, 11);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double vol = unit_ball_volume(4) * std::pow(s.times[i] + s.R, 4);
    s.F0[i] = c * vol;
    s.Lp[i] = c * c * vol;
  }
  const TestFunctionContext ctx(4);
  const auto I = I_series(ctx, 2.0, 1.0, s.times);
  const auto h = check_holder_chain(s, ex, I);
  for (double g : h.volume_bound) CHECK(std::abs(g) < 1e-12);
  CHECK(h.violations == 0);
}

TEST_CASE("holder chain on a zero run") {
  const ExponentSet ex = exponent_set(4, 2.0);
  DiagnosticsSeries s = synthetic_series([](double) { return 0.0; }, 0.0, 1.0, 5);
  const TestFunctionContext ctx(4);
  const auto h = check_holder_chain(s, ex, I_series(ctx, 2.0, 1.0, s.times));
  CHECK(h.violations == 0);
}

TEST_CASE("lemma bound limits") {
  const DataIntegrals d{3.0, 1.0};
  CHECK(lemma22_lower_bound(0.0, d) == 1.0);
  CHECK(lemma22_lower_bound(50.0, d) == doctest::Approx(1.5));
}

TEST_CASE("recorder along a bump run") {
  SimulationConfig c;
  c.n = 4;
  c.p = 2.0;
  c.h = 1.0 / 200.0;
  c.t_max = 4.0;
  c.initial_data.amplitude = 5.0;
  const TestFunctionContext ctx(4);
  DiagnosticsRecorder rec(c, ctx);
  simulate(c, {std::ref(rec)});
  const auto& s = rec.series();
  REQUIRE(s.size() == 401);
  const DataIntegrals direct = data_integrals(make_initial_state(c), ctx);
  CHECK(rec.data().sum_phi1 == doctest::Approx(direct.sum_phi1));
  for (double m : lemma22_margins(s, rec.data())) CHECK(m >= -1e-6);
  for (double v : s.Lp) CHECK(v >= 0.0);
  const auto res = check_d2F0_identity(s);
  for (std::size_t i = 1; i + 1 < res.size(); ++i) CHECK(res[i] < 2e-2);
  CHECK(s.truncated(2.0).size() == 201);
}

TEST_CASE("inequality tolerance") {
  CHECK_FALSE(inequality_violated(1.0, 1.0 + 5e-9));
  CHECK(inequality_violated(1.0, 1.0 + 1e-6));
  CHECK_FALSE(inequality_violated(0.0, 5e-13));
  CHECK(relative_gap(0.0, 0.0) == 0.0);
}

TEST_CASE("growth fits on constructed inputs") {
  const ExponentSet ex = exponent_set(4, 2.0);
  std::vector<double> t, f, g;
  for (int i = 0; i <= 400; ++i) {
    t.push_back(2.0 + 0.1 * i);
    f.push_back(std::pow(t.back() + 1.0, ex.a));
    g.push_back(f.back() * std::log(t.back()));
  }
  const GrowthFit pure = fit_growth(t, f, 1.0, ex, {t.front(), t.back()});
  CHECK(pure.fitted_exponent == doctest::Approx(ex.a).epsilon(1e-8));
  CHECK(pure.loglog_slope == doctest::Approx(ex.a).epsilon(1e-10));
  CHECK(std::abs(pure.log_factor_slope) < 1e-10);
  CHECK(pure.K0_estimate == doctest::Approx(1.0));
  const GrowthFit logf = fit_growth(t, g, 1.0, ex, {t.front(), t.back()});
  CHECK(logf.log_factor_slope == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(logf.fitted_exponent - ex.a) < 1e-6);
  const GrowthFit narrow = fit_growth(t, g, 1.0, ex, {t.front(), 10.0});
  CHECK(logf.K0_estimate == doctest::Approx(narrow.K0_estimate));

  CHECK_THROWS_AS(fit_growth(t, f, 1.0, ex, {5.0, 5.5}), std::invalid_argument);
  CHECK_THROWS_AS(fit_growth(t, f, 1.0, ex, {0.0, 10.0}), std::invalid_argument);
  std::vector<double> bad(f);
  bad[50] = -1.0;
  CHECK_THROWS_AS(fit_growth(t, bad, 1.0, ex, {t.front(), t.back()}), std::domain_error);
}

TEST_CASE("residual summary skips NaN") {
  const std::vector<double> v{1.0, std::nan(""), -2.0, 3.0};
  const auto s = summarize(std::span<const double>(v), [](double x) { return x < 0.0; });
  CHECK(s.samples == 3);
  CHECK(s.min == -2.0);
  CHECK(s.max == 3.0);
  CHECK(s.violations == 1);
}

}
