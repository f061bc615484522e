#include "critwave/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "critwave/criticality.hpp"

namespace critwave {

namespace {

constexpr int kPanelOrder = 16;

// Adds exp(log_term) to the running value exp(log_acc).
double log_add(double log_acc, double log_term) {
  if (log_term == -std::numeric_limits<double>::infinity()) return log_acc;
  if (log_acc == -std::numeric_limits<double>::infinity()) return log_term;
  const double hi = std::max(log_acc, log_term);
  const double lo = std::min(log_acc, log_term);
  return hi + std::log1p(std::exp(lo - hi));
}

// log of ∫_lo^hi exp(log_f(r)) r^{n-1} dr by Gauss panels of width <= 1/4.
double log_panel_integral(int n, double lo, double hi,
                          const std::function<double(double)>& log_f) {
  const GaussRule& rule = cached_gauss_legendre(kPanelOrder);
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * 4.0)));
  const double width = (hi - lo) / panels;
  double log_acc = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(rule.nodes.size());
  for (int k = 0; k < panels; ++k) {
    const double mid = lo + (k + 0.5) * width;
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = mid + 0.5 * width * rule.nodes[i];
      const double lf = log_f(r);
      logs[i] = lf == -std::numeric_limits<double>::infinity()
                    ? lf
                    : lf + (n - 1) * std::log(r) + std::log(0.5 * width * rule.weights[i]);
      peak = std::max(peak, logs[i]);
    }
    if (peak == -std::numeric_limits<double>::infinity()) continue;
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - peak);
    log_acc = log_add(log_acc, peak + std::log(acc));
  }
  return log_acc;
}

}  // namespace

TestFunctionContext::TestFunctionContext(int n, int quadrature_nodes)
    : n_(n), quadrature_nodes_(quadrature_nodes) {
  if (n < 2) throw std::invalid_argument("TestFunctionContext: n must be >= 2");
  if (quadrature_nodes < 64) {
    throw std::invalid_argument("TestFunctionContext: quadrature_nodes must be >= 64");
  }
  sphere_area_ = unit_sphere_area(n);
  cross_section_area_ = unit_sphere_area(n - 1);
  rule_ = &cached_gauss_legendre(kPanelOrder);
}

double TestFunctionContext::scaled_angular_integral(double r) const {
  const int panels = std::max(2, quadrature_nodes_ / kPanelOrder);
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double weight = n_ == 2 ? 1.0 : std::pow(s, n_ - 2);
    // cos θ - 1 = -2 sin²(θ/2) avoids cancellation near θ = 0.
    const double half = std::sin(0.5 * theta);
    return std::exp(-2.0 * r * half * half) * weight;
  };
  // The integrand concentrates in θ ≲ 1/√r; resolve that cap separately.
  const double cap = r > 1.0 ? std::min(std::numbers::pi, 12.0 / std::sqrt(r))
                             : std::numbers::pi;
  if (cap >= std::numbers::pi) {
    return composite_gauss(integrand, 0.0, std::numbers::pi, panels, *rule_);
  }
  const int inner = std::max(1, panels / 2);
  const int outer = std::max(1, panels - inner);
  return composite_gauss(integrand, 0.0, cap, inner, *rule_) +
         composite_gauss(integrand, cap, std::numbers::pi, outer, *rule_);
}

double TestFunctionContext::log_phi1(double r) const {
  if (r < 0.0) throw std::invalid_argument("log_phi1: r must be >= 0");
  return std::log(cross_section_area_) + r + std::log(scaled_angular_integral(r));
}

double phi1(const TestFunctionContext& ctx, double r) {
  if (r < 0.0) throw std::invalid_argument("phi1: r must be >= 0");
  if (r > kExpGuard) throw std::range_error("phi1: r exceeds the exp overflow guard");
  return std::exp(ctx.log_phi1(r));
}

double phi1_asymptotic(int n, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("phi1_asymptotic: r must be > 0");
  if (r > kExpGuard) throw std::range_error("phi1_asymptotic: r exceeds the exp overflow guard");
  const double k = 0.5 * (n - 1.0);
  return std::pow(2.0 * std::numbers::pi, k) * std::pow(r, -k) * std::exp(r);
}

double psi1(const TestFunctionContext& ctx, double r, double t) {
  if (r < 0.0 || t < 0.0) throw std::invalid_argument("psi1: r and t must be >= 0");
  if (r - t > kExpGuard) throw std::range_error("psi1: r - t exceeds the exp overflow guard");
  if (r > kLogDomainRadius) return std::exp(ctx.log_phi1(r) - t);
  return phi1(ctx, r) * std::exp(-t);
}

double radial_log_integral(int n, double upper,
                           const std::function<double(double)>& log_f) {
  if (!(upper > 0.0)) return 0.0;
  const double log_val = log_panel_integral(n, 0.0, upper, log_f);
  if (log_val == -std::numeric_limits<double>::infinity()) return 0.0;
  return unit_sphere_area(n) * std::exp(log_val);
}

std::vector<DenominatorIntegral> I_series(const TestFunctionContext& ctx,
                                          double p, double R,
                                          std::span<const double> times) {
  if (!(p > 1.0)) throw std::invalid_argument("I_series: p must be > 1");
  if (!(R > 0.0)) throw std::invalid_argument("I_series: R must be > 0");
  const int n = ctx.n();
  const double pp = p / (p - 1.0);
  // log of ∫₀^L φ₁(r)^{p'} r^{n-1} dr, grown panel by panel.
  auto log_phi_power = [&](double r) { return pp * ctx.log_phi1(r); };
  const double bound_exponent = (n - 1.0) - 0.5 * (n - 1.0) * pp;
  const double log_omega = std::log(ctx.sphere_area());

  std::vector<DenominatorIntegral> out;
  out.reserve(times.size());
  double log_acc = -std::numeric_limits<double>::infinity();
  double reached = 0.0;
  for (double t : times) {
    if (t < 0.0) throw std::invalid_argument("I_series: t must be >= 0");
    const double upper = t + R;
    if (upper < reached) throw std::invalid_argument("I_series: times must be nondecreasing");
    if (upper > reached) {
      log_acc = log_add(log_acc, log_panel_integral(n, reached, upper, log_phi_power));
      reached = upper;
    }
    if (upper - t > kExpGuard) throw std::range_error("I_series: ψ₁ exceeds the overflow guard");
    const double log_I = log_omega + log_acc - pp * t;
    DenominatorIntegral d;
    d.t = t;
    d.value = std::exp(log_I);
    d.normalized = std::exp(log_I - pp * R - bound_exponent * std::log(upper));
    out.push_back(d);
  }
  return out;
}

DenominatorIntegral I_integral(const TestFunctionContext& ctx, double p,
                               double R, double t) {
  const double times[] = {t};
  return I_series(ctx, p, R, times).front();
}

}  // namespace critwave
