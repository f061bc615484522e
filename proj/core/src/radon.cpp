#include "critwave/radon.hpp"

#include <array>
#include <limits>
#include <stdexcept>

namespace critwave {

std::string to_string(RadonKind kind) {
  switch (kind) {
    case RadonKind::of_u:
      return "of_u";
    case RadonKind::of_abs_u:
      return "of_abs_u";
    case RadonKind::of_abs_u_pow_p:
      return "of_abs_u_pow_p";
  }
  return "unknown";
}

namespace {

constexpr int kCellOrder = 6;

// Cubic a + b x + c x² + d x³ in the local cell coordinate x = r/h - i.
struct CellCubic {
  std::array<double, 4> c{};
  double operator()(double x) const { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); }
};

std::vector<CellCubic> cell_cubics(std::span<const double> field) {
  const long count = static_cast<long>(field.size());
  auto at = [&](long i) {
    if (i < 0) i = -i;
    return i < count ? field[static_cast<std::size_t>(i)] : 0.0;
  };
  std::vector<CellCubic> cells(field.size());
  for (long i = 0; i < count; ++i) {
    const double ym1 = at(i - 1), y0 = at(i), y1 = at(i + 1), y2 = at(i + 2);
    // Lagrange interpolant on nodes -1, 0, 1, 2 expanded in powers of x.
    CellCubic& cc = cells[static_cast<std::size_t>(i)];
    cc.c[0] = y0;
    cc.c[1] = -ym1 / 3.0 - y0 / 2.0 + y1 - y2 / 6.0;
    cc.c[2] = ym1 / 2.0 - y0 + y1 / 2.0;
    cc.c[3] = -ym1 / 6.0 + y0 / 2.0 - y1 / 2.0 + y2 / 6.0;
  }
  return cells;
}

// Last index whose cubic cell can be nonzero.
std::size_t last_active_cell(std::span<const double> field) {
  std::size_t last = 0;
  bool any = false;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != 0.0) {
      last = i;
      any = true;
    }
  }
  if (!any) return 0;
  return std::min(field.size() - 1, last + 1);
}

double radon_from_cells(const std::vector<CellCubic>& cells, std::size_t active,
                        double h, int n, double rho) {
  const GaussRule& rule = cached_gauss_legendre(kCellOrder);
  const double rho2 = rho * rho;
  const auto first = static_cast<std::size_t>(std::floor(rho / h));
  double total = 0.0;
  for (std::size_t i = first; i <= active && i < cells.size(); ++i) {
    const double r_lo = std::max(rho, static_cast<double>(i) * h);
    const double r_hi = static_cast<double>(i + 1) * h;
    if (!(r_hi > r_lo)) continue;
    const double s_lo = std::sqrt(std::max(0.0, r_lo * r_lo - rho2));
    const double s_hi = std::sqrt(r_hi * r_hi - rho2);
    const double mid = 0.5 * (s_lo + s_hi);
    const double half = 0.5 * (s_hi - s_lo);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = mid + half * rule.nodes[k];
      const double x = std::sqrt(rho2 + s * s) / h - static_cast<double>(i);
      const double weight = n == 2 ? 1.0 : (n == 3 ? s : std::pow(s, n - 2));
      acc += rule.weights[k] * cells[i](x) * weight;
    }
    total += half * acc;
  }
  return unit_sphere_area(n - 1) * total;
}

}  // namespace

double radon_radial(std::span<const double> field, double h, int n, double rho) {
  if (field.empty()) return 0.0;
  const auto cells = cell_cubics(field);
  return radon_from_cells(cells, last_active_cell(field), h, n, std::abs(rho));
}

std::vector<double> radon_integrand(const RadialState& state, RadonKind kind, double p) {
  std::vector<double> f(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double u = state.u[i];
    switch (kind) {
      case RadonKind::of_u:
        f[i] = u;
        break;
      case RadonKind::of_abs_u:
        f[i] = std::abs(u);
        break;
      case RadonKind::of_abs_u_pow_p:
        f[i] = u == 0.0 ? 0.0 : std::pow(std::abs(u), p);
        break;
    }
  }
  return f;
}

RadonSection radon_section(const RadialState& state, RadonKind kind, double p) {
  RadonSection section;
  section.n = state.n;
  section.t = state.t;
  section.h = state.h;
  section.p = p;
  section.kind = kind;
  section.values.assign(state.size(), 0.0);
  const auto field = radon_integrand(state, kind, p);
  const auto cells = cell_cubics(field);
  const std::size_t active = last_active_cell(field);
  for (std::size_t j = 0; j <= active + 1 && j < state.size(); ++j) {
    section.values[j] = radon_from_cells(cells, active, state.h, state.n, section.rho(j));
  }
  return section;
}

double radon_mass(const RadonSection& section) {
  return 2.0 * trapezoid(section.values, section.h);
}

WaveResidual check_1d_wave(std::span<const RadonSection> u_sections,
                           std::span<const RadonSection> source_sections, double R) {
  const std::size_t levels = u_sections.size();
  if (levels < 3) throw std::invalid_argument("check_1d_wave: need at least 3 time levels");
  if (source_sections.size() != levels) {
    throw std::invalid_argument("check_1d_wave: source sections must align with u sections");
  }
  const std::size_t count = u_sections[0].values.size();
  const double h = u_sections[0].h;
  const double dt = u_sections[1].t - u_sections[0].t;
  if (!(dt > 0.0)) throw std::invalid_argument("check_1d_wave: times must increase");
  for (std::size_t k = 0; k < levels; ++k) {
    if (u_sections[k].values.size() != count || source_sections[k].values.size() != count ||
        u_sections[k].h != h || source_sections[k].h != h) {
      throw std::invalid_argument("check_1d_wave: mismatched grids");
    }
    if (std::abs(source_sections[k].t - u_sections[k].t) > 1e-9 * std::max(1.0, dt)) {
      throw std::invalid_argument("check_1d_wave: source and u sections at different times");
    }
    if (k > 0 && std::abs((u_sections[k].t - u_sections[k - 1].t) - dt) > 1e-6 * dt) {
      throw std::invalid_argument("check_1d_wave: time levels must be uniformly spaced");
    }
  }
  WaveResidual out;
  double sum = 0.0;
  double ref = 0.0;
  for (std::size_t k = 1; k + 1 < levels; ++k) {
    const auto& prev = u_sections[k - 1].values;
    const auto& cur = u_sections[k].values;
    const auto& next = u_sections[k + 1].values;
    const auto& src = source_sections[k].values;
    const double t = u_sections[k].t;
    std::vector<double> res(count, 0.0);
    for (std::size_t j = 0; j + 1 < count; ++j) {
      const double left = j == 0 ? cur[1] : cur[j - 1];  // R(u) is even in ρ
      const double d2t = (next[j] - 2.0 * cur[j] + prev[j]) / (dt * dt);
      const double d2r = (cur[j + 1] - 2.0 * cur[j] + left) / (h * h);
      res[j] = d2t - d2r - src[j];
      if (static_cast<double>(j) * h <= t + R) {
        sum += res[j] * res[j];
        ref += d2t * d2t;
      }
    }
    out.times.push_back(t);
    out.residual.push_back(std::move(res));
  }
  // L² in ρ, mean square over the time levels: a dt weight would make the
  // norm shrink with the level spacing and skew convergence orders.
  const double levels_used = static_cast<double>(levels - 2);
  out.l2 = std::sqrt(sum * h / levels_used);
  out.reference_l2 = std::sqrt(ref * h / levels_used);
  out.relative_l2 = out.l2 / std::max(out.reference_l2, 1e-30);
  return out;
}

double dalembert_lower_bound(std::span<const double> times, std::span<const double> Lp,
                             double rho, double t, double R) {
  if (times.size() != Lp.size()) {
    throw std::invalid_argument("dalembert_lower_bound: series length mismatch");
  }
  const double upper = 0.5 * (t - std::abs(rho) - R);
  if (!(upper > 0.0) || times.empty()) return 0.0;
  if (times.front() > 0.0 || times.back() < upper - 1e-12) {
    throw std::invalid_argument("dalembert_lower_bound: series must cover [0, (t-rho-R)/2]");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double a = times[i];
    if (a >= upper) break;
    const double b = std::min(times[i + 1], upper);
    const double fb = b == times[i + 1]
                          ? Lp[i + 1]
                          : Lp[i] + (Lp[i + 1] - Lp[i]) * (b - a) / (times[i + 1] - a);
    acc += 0.5 * (Lp[i] + fb) * (b - a);
  }
  return 0.5 * acc;
}

double power_lower_bound_check(const RadonSection& section, double rho, double t, double R,
                               const ExponentSet& exponents) {
  const double gap = t - rho - R;
  if (gap < 1.0 - 1e-12) {
    throw std::invalid_argument("power_lower_bound_check: requires t - rho - R >= 1");
  }
  const double value = linear_interpolate(section.values, section.h, rho);
  const double exponent = exponents.n - 0.5 * (exponents.n - 1.0) * exponents.p;
  return value / std::pow(gap, exponent);
}

}  // namespace critwave
