#include "critwave/sharp_transform.hpp"

#include <future>
#include <random>
#include <stdexcept>

#include "critwave/diagnostics.hpp"

namespace critwave {

namespace {

std::vector<double> node_positions(const LineField& f) {
  std::vector<double> xs(f.values.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = f.x(i);
  return xs;
}

// Prefix integrals of the linear interpolant of |f|.
std::vector<double> abs_prefix(const LineField& f) {
  std::vector<double> prefix(f.values.size(), 0.0);
  for (std::size_t i = 1; i < prefix.size(); ++i) {
    prefix[i] = prefix[i - 1] + 0.5 * f.h * (std::abs(f.values[i - 1]) + std::abs(f.values[i]));
  }
  return prefix;
}

// ∫₀^y of the interpolant of |f|, for y clipped to [0, L].
double abs_cumulative(const LineField& f, const std::vector<double>& prefix, double y) {
  const std::size_t count = f.values.size();
  if (y <= 0.0) return 0.0;
  if (y >= f.x(count - 1)) return prefix.back();
  const auto i = static_cast<std::size_t>(std::floor(y / f.h));
  const double theta = y / f.h - static_cast<double>(i);
  const double a = std::abs(f.values[i]);
  const double b = std::abs(f.values[std::min(i + 1, count - 1)]);
  return prefix[i] + f.h * (a * theta + 0.5 * (b - a) * theta * theta);
}

double lp_norm(std::span<const double> values, double h, double p) {
  std::vector<double> powered(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) powered[i] = std::pow(std::abs(values[i]), p);
  return std::pow(trapezoid(powered, h), 1.0 / p);
}

}  // namespace

double transform_T(const LineField& f, double rho) {
  const auto breaks = node_positions(f);
  auto interp = [&](double r) { return linear_interpolate(f.values, f.h, r); };
  return transform_T(interp, f.n, f.length(), rho, breaks);
}

std::vector<double> transform_T_all(const LineField& f) {
  const std::size_t count = f.values.size();
  const int n = f.n;
  std::vector<double> out(count, 0.0);
  if (count == 0) return out;
  if (count == 1) {
    out[0] = 2.0 * f.values[0] / (n - 1.0);
    return out;
  }
  // In units of h, x = s²: the left and right halves of the hat at offset m
  // against x^{(n-3)/2} are polynomial integrals in s.
  const GaussRule& rule = cached_gauss_legendre(10);
  auto poly_integral = [&](double s_lo, double s_hi, auto&& g) {
    const double mid = 0.5 * (s_lo + s_hi);
    const double half = 0.5 * (s_hi - s_lo);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = mid + half * rule.nodes[k];
      acc += rule.weights[k] * g(s) * (n == 2 ? 1.0 : std::pow(s, n - 2));
    }
    return 2.0 * half * acc;
  };
  std::vector<double> left(count, 0.0), right(count, 0.0);
  for (std::size_t m = 0; m < count; ++m) {
    const double md = static_cast<double>(m);
    right[m] = poly_integral(std::sqrt(md), std::sqrt(md + 1.0),
                             [&](double s) { return md + 1.0 - s * s; });
    if (m >= 1) {
      left[m] = poly_integral(std::sqrt(md - 1.0), std::sqrt(md),
                              [&](double s) { return s * s - md + 1.0; });
    }
  }
  const std::size_t last = count - 1;
  for (std::size_t j = 0; j < last; ++j) {
    double acc = f.values[j] * right[0];
    for (std::size_t i = j + 1; i < last; ++i) {
      acc += f.values[i] * (left[i - j] + right[i - j]);
    }
    acc += f.values[last] * left[last - j];
    out[j] = acc * std::pow(static_cast<double>(last - j), -0.5 * (n - 1.0));
  }
  out[last] = 2.0 * f.values[last] / (n - 1.0);
  return out;
}

double maximal_function(const LineField& f, double x) {
  const auto prefix = abs_prefix(f);
  const double L = f.length();
  double best = std::abs(linear_interpolate(f.values, f.h, x));
  const auto k_max = static_cast<std::size_t>(
      std::ceil(std::max(std::abs(x), std::abs(L - x)) / f.h)) + 1;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double r = static_cast<double>(k) * f.h;
    const double mass = abs_cumulative(f, prefix, x + r) - abs_cumulative(f, prefix, x - r);
    best = std::max(best, mass / (2.0 * r));
  }
  return best;
}

std::vector<double> maximal_function_all(const LineField& f) {
  const auto prefix = abs_prefix(f);
  const std::size_t count = f.values.size();
  std::vector<double> out(count, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    double best = std::abs(f.values[j]);
    const std::size_t k_max = std::max(j, count - 1 - j);
    for (std::size_t k = 1; k <= k_max; ++k) {
      const std::size_t lo = j >= k ? j - k : 0;
      const std::size_t hi = std::min(j + k, count - 1);
      const double mass = prefix[hi] - prefix[lo];
      best = std::max(best, mass / (2.0 * static_cast<double>(k) * f.h));
    }
    out[j] = best;
  }
  return out;
}

std::vector<double> check_pointwise_domination(const LineField& f) {
  const auto T = transform_T_all(f);
  const auto M = maximal_function_all(f);
  std::vector<double> margin(T.size());
  for (std::size_t j = 0; j < T.size(); ++j) margin[j] = 2.0 * M[j] - std::abs(T[j]);
  return margin;
}

double lp_operator_ratio(const LineField& f, double p) {
  const double denom = lp_norm(f.values, f.h, p);
  if (!(denom > 0.0)) throw std::invalid_argument("lp_operator_ratio: ‖f‖_p must be > 0");
  return lp_norm(transform_T_all(f), f.h, p) / denom;
}

LineField random_nonneg_field(std::uint64_t seed, int n, double t, double R, std::size_t nodes) {
  std::mt19937_64 gen(seed);
  const double L = t + R;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int features = 1 + static_cast<int>(gen() % 8);
  struct Feature {
    double centre, width, amplitude;
    bool box;
  };
  std::vector<Feature> fs;
  for (int k = 0; k < features; ++k) {
    Feature ft;
    ft.centre = L * unit(gen);
    ft.width = std::exp(std::log(L) * unit(gen));
    ft.amplitude = 0.1 + 0.9 * unit(gen);
    ft.box = unit(gen) < 0.5;
    fs.push_back(ft);
  }
  return make_line_field(n, t, R, nodes, [&](double x) {
    double v = 0.0;
    for (const Feature& ft : fs) {
      const double z = (x - ft.centre) / (0.5 * ft.width);
      if (std::abs(z) >= 1.0) continue;
      v += ft.box ? ft.amplitude : ft.amplitude * std::exp(1.0 - 1.0 / (1.0 - z * z));
    }
    return v;
  });
}

std::vector<RatioSample> operator_ratio_sweep(std::span<const std::uint64_t> seeds,
                                              std::span<const double> times, int n, double p,
                                              double R, std::size_t nodes, int jobs) {
  std::vector<RatioSample> out;
  for (double t : times) {
    for (std::uint64_t seed : seeds) out.push_back({seed, t, 0.0});
  }
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < out.size(); i += stride) {
      const LineField f = random_nonneg_field(out[i].seed, n, out[i].t, R, nodes);
      out[i].ratio = lp_operator_ratio(f, p);
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1) {
    work(0, 1);
    return out;
  }
  std::vector<std::future<void>> tasks;
  for (std::size_t w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, work, w, workers));
  }
  for (auto& task : tasks) task.get();
  return out;
}

LineField weighted_profile(const RadialState& state, double R, double p) {
  const double L = state.t + R;
  const auto nodes = static_cast<std::size_t>(std::llround(L / state.h)) + 1;
  const double exponent = (state.n - 1.0) / p;
  return make_line_field(state.n, state.t, R, std::max<std::size_t>(nodes, 2), [&](double r) {
    return std::abs(cubic_interpolate_even(state.u, state.h, r)) * std::pow(r, exponent);
  });
}

WeightedInequality weighted_inequality_check(const RadonSection& radon_abs_u,
                                             const RadialState& state,
                                             const ExponentSet& exponents, double R) {
  if (exponents.n < 4) {
    throw std::domain_error("weighted_inequality_check: requires n >= 4 (p <= 2)");
  }
  const int n = exponents.n;
  const double p = exponents.p;
  const double L = state.t + R;
  const double kernel_exponent = -0.5 * (n - 1.0) * p;
  const double rho_exponent = (n - 1.0) - 0.5 * (n - 1.0) * p;
  auto integrand = [&](double rho, double value) {
    return std::pow(std::abs(value), p) * std::pow(L - rho, kernel_exponent) *
           std::pow(rho, rho_exponent);
  };
  WeightedInequality out;
  const auto& values = radon_abs_u.values;
  // The quadrature stops one cell short of ρ = t+R. The kernel is singular
  // there and the discrete support reaches a few cells past the cone, while
  // the exact integrand stays bounded; the dropped piece is O(h).
  const double rho_end = L - radon_abs_u.h;
  for (std::size_t j = 1; j < values.size() && radon_abs_u.rho(j) <= rho_end; ++j) {
    const double r0 = radon_abs_u.rho(j - 1);
    const double r1 = radon_abs_u.rho(j);
    out.lhs += 0.5 * (integrand(r0, values[j - 1]) + integrand(r1, values[j])) * (r1 - r0);
  }
  out.rhs = Lp_integral(state, p);
  return out;
}

LogRefinementMargins log_refinement_check(std::span<const double> times,
                                          std::span<const double> Lp,
                                          const ExponentSet& exponents, double R) {
  if (exponents.n < 4) throw std::domain_error("log_refinement_check: requires n >= 4");
  if (times.size() != Lp.size()) throw std::invalid_argument("log_refinement_check: length mismatch");
  const double exponent = (exponents.n - 1.0) - 0.5 * (exponents.n - 1.0) * exponents.p;
  LogRefinementMargins out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!(t > 2.0 * (R + 1.0) + 1.0)) continue;
    const double scale = std::pow(t - R, exponent) * std::log(0.5 * (t - R));
    out.times.push_back(t);
    out.margin.push_back(Lp[i] / scale);
  }
  if (out.times.empty()) {
    throw std::invalid_argument("log_refinement_check: no samples past t = 2(R+1)+1");
  }
  return out;
}

double refinement_constant_cR(double R) { return 1.0 + 2.0 * R; }

}  // namespace critwave
