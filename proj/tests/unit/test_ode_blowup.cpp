#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "critwave/criticality.hpp"
#include "critwave/ode_blowup.hpp"

using namespace critwave;

namespace {
// Blow-up time of F'' = F², F(0) = 1, F'(0) = 0.
const double kQuadraticBlowup =
    std::tgamma(1.0 / 6.0) * std::sqrt(M_PI) / (3.0 * std::tgamma(2.0 / 3.0)) * std::sqrt(1.5);

OdeProblem reference_problem(double K0) {
  const ExponentSet e = exponent_set(4, 2.0);
  OdeProblem pr;
  pr.p = e.p;
  pr.a = e.a;
  pr.q = e.q;
  pr.K1 = e.K1;
  pr.K0 = K0;
  pr.R = 1.0;
  pr.T0 = 0.0;
  pr.horizon = 1e4;
  return pr;
}
}  // namespace

TEST_SUITE("ode_blowup") {

TEST_CASE("quadratic oracle with both integrators") {
  IvpSpec s;
  s.p = 2.0;
  s.q = 0.0;
  s.K1 = 1.0;
  s.R = 0.0;
  s.F0 = 1.0;
  s.dF0 = 0.0;
  s.horizon = 10.0;
  for (auto integ : {OdeIntegrator::rk4_step_doubling, OdeIntegrator::dopri5}) {
    const OdeBlowupReport r = integrate_ivp(s, integ);
    REQUIRE(r.verdict == OdeVerdict::blew_up);
    CHECK(*r.t_blowup == doctest::Approx(kQuadraticBlowup).epsilon(1e-4));
    CHECK(*r.t_blowup_lower <= *r.t_blowup);
  }
}

TEST_CASE("zero and huge envelopes") {
  const OdeBlowupReport zero = integrate_comparison(reference_problem(0.0));
  CHECK(zero.verdict == OdeVerdict::survived);
  CHECK(zero.F_end == 0.0);
  const OdeBlowupReport a = integrate_comparison(reference_problem(1e6));
  const OdeBlowupReport b = integrate_comparison(reference_problem(1e6), OdeIntegrator::dopri5);
  REQUIRE(a.verdict == OdeVerdict::blew_up);
  REQUIRE(b.verdict == OdeVerdict::blew_up);
  CHECK(*a.t_blowup < 1.0);
  CHECK(*a.t_blowup == doctest::Approx(*b.t_blowup).epsilon(1e-2));
}

TEST_CASE("rescaling") {
  OdeProblem pr = reference_problem(12.0);
  pr.R = 3.0;
  pr.T0 = 7.0;
  pr.horizon = 7.0 + 10.0 * 200.0;
  const OdeProblem n = rescale(pr);
  CHECK(n.R == 1.0);
  CHECK(n.T0 == 0.0);
  CHECK(n.horizon == doctest::Approx(200.0));
  CHECK(n.K0 == pr.K0);
  CHECK(rescaled_time(pr, 7.0) == 0.0);
  CHECK(rescaled_time(pr, 17.0) == doctest::Approx(1.0));
  for (double K0 : {5.0, 12.0, 40.0}) {
    pr.K0 = K0;
    OdeProblem m = rescale(pr);
    const auto ro = integrate_comparison(pr);
    const auto rn = integrate_comparison(m);
    CHECK(ro.verdict == rn.verdict);
    if (ro.t_blowup && rn.t_blowup) {
      CHECK(rescaled_time(pr, *ro.t_blowup) == doctest::Approx(*rn.t_blowup).epsilon(1e-3));
    }
  }
}

TEST_CASE("envelope equilibrium") {
  const ExponentSet e = exponent_set(4, 2.0);
  CHECK(envelope_equilibrium(e.p, e.a, e.K1) == doctest::Approx(M_PI * M_PI));
}

TEST_CASE("threshold bracket") {
  const ExponentSet e = exponent_set(4, 2.0);
  const ThresholdResult th = threshold_c0(e.p, e.a, e.q, e.K1, 1e4);
  CHECK(th.lower < th.upper);
  CHECK((th.upper - th.lower) / th.upper <= 0.01);
  CHECK(th.c0 == th.upper);
  CHECK(integrate_comparison(reference_problem(2.0 * th.c0)).verdict == OdeVerdict::blew_up);
  CHECK(integrate_comparison(reference_problem(0.5 * th.c0)).verdict == OdeVerdict::survived);
  const ThresholdResult longer = threshold_c0(e.p, e.a, e.q, e.K1, 2e4);
  CHECK(std::abs(longer.c0 - th.c0) / th.c0 < 0.05);
}

TEST_CASE("threshold is shift invariant and thread independent") {
  const ExponentSet e = exponent_set(4, 2.0);
  const std::vector<ShiftPoint> grid{{1.0, 1.0}, {3.0, 7.0}, {10.0, 3.0}};
  const InvarianceReport one = invariance_check(e.p, e.a, e.q, e.K1, grid, 1e4, 1);
  const InvarianceReport three = invariance_check(e.p, e.a, e.q, e.K1, grid, 1e4, 3);
  CHECK(one.spread < 0.05);
  REQUIRE(one.thresholds.size() == three.thresholds.size());
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(one.thresholds[i].c0 == three.thresholds[i].c0);
}

TEST_CASE("degenerate a = 1") {
  // (p-1)a = q-2 with a = 1: the equilibrium is zero, so any positive data
  // blows up eventually.
  OdeProblem pr;
  pr.p = 3.0;
  pr.a = 1.0;
  pr.q = 4.0;
  pr.K1 = 1.0;
  pr.K0 = 1.0;
  pr.T0 = 0.0;
  pr.horizon = 1e4;
  CHECK(envelope_equilibrium(pr.p, pr.a, pr.K1) == 0.0);
  CHECK_NOTHROW(integrate_comparison(pr));
}

TEST_CASE("validation") {
  OdeProblem pr = reference_problem(1.0);
  pr.q = 5.0;
  CHECK_THROWS_AS(integrate_comparison(pr), std::invalid_argument);
  pr = reference_problem(1.0);
  pr.p = 1.0;
  CHECK_THROWS_AS(pr.validate(), std::invalid_argument);
  pr = reference_problem(-1.0);
  CHECK_THROWS_AS(pr.validate(), std::invalid_argument);
  pr = reference_problem(1.0);
  pr.horizon = 0.0;
  CHECK_THROWS_AS(pr.validate(), std::invalid_argument);
}

}
