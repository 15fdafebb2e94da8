#include "nlw/field.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>
#include <string>

#include "nlw/errors.hpp"
#include "nlw/random.hpp"

namespace nlw {

std::size_t Grid::index_of(double x) const {
  const double s = std::round((x - x_min) / dx);
  if (s <= 0.0) return 0;
  if (s >= static_cast<double>(n_points - 1)) return n_points - 1;
  return static_cast<std::size_t>(s);
}

Grid make_grid(double x_min, double x_max, double dx) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(dx)) {
    throw InvalidInput("make_grid: non-finite argument");
  }
  if (!(x_min < x_max)) throw InvalidInput("make_grid: need x_min < x_max");
  if (!(dx > 0.0)) throw InvalidInput("make_grid: need dx > 0");
  const double intervals = (x_max - x_min) / dx;
  if (intervals > kMaxGridIntervals) {
    std::ostringstream msg;
    msg << "make_grid: " << intervals << " intervals exceeds the cap of " << kMaxGridIntervals;
    throw ResourceLimit(msg.str());
  }
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.dx = dx;
  g.n_points = static_cast<std::size_t>(std::llround(intervals)) + 1;
  if (g.n_points < 3) throw InvalidInput("make_grid: fewer than 3 points");
  const double end = g.x(g.n_points - 1);
  const double scale = std::max({std::fabs(x_min), std::fabs(x_max), x_max - x_min});
  if (std::fabs(end - x_max) > 1e-12 * scale) {
    throw InvalidInput("make_grid: (x_max - x_min) is not an integer multiple of dx");
  }
  return g;
}

Grid make_symmetric_grid(double half_width, double dx) {
  if (!(dx > 0.0) || !(half_width > 0.0)) throw InvalidInput("make_symmetric_grid: bad arguments");
  const double cells = std::ceil(half_width / dx - 1e-9);
  if (2.0 * cells > kMaxGridIntervals) throw ResourceLimit("make_symmetric_grid: grid too large");
  const double h = cells * dx;
  return make_grid(-h, h, dx);
}

void ModelParams::validate() const {
  if (!std::isfinite(p) || !(p > 1.0)) throw InvalidInput("ModelParams: need p > 1");
}

FieldState::FieldState(Grid grid, double t, std::vector<double> u, std::vector<double> ut)
    : grid_(grid), t_(t), u_(std::move(u)), ut_(std::move(ut)) {
  const std::size_t n = grid_.n_points;
  if (u_.size() != n || ut_.size() != n) throw InvalidInput("FieldState: size mismatch with grid");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(u_[j]) || !std::isfinite(ut_[j])) {
      throw NumericalFault("FieldState: non-finite value at index " + std::to_string(j));
    }
  }
  if (u_.front() != 0.0 || u_.back() != 0.0 || ut_.front() != 0.0 || ut_.back() != 0.0) {
    throw InvalidInput("FieldState: boundary values must be zero");
  }
}

std::pair<std::size_t, std::size_t> FieldState::support() const {
  const std::size_t n = grid_.n_points;
  std::size_t lo = n;
  std::size_t hi = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (u_[j] != 0.0 || ut_[j] != 0.0) {
      lo = std::min(lo, j);
      hi = j;
    }
  }
  if (lo == n) return {1, 0};
  return {lo, hi};
}

Norms norms(const FieldState& state, const ModelParams& params) {
  params.validate();
  const auto u = state.u();
  const auto ut = state.ut();
  const Grid& g = state.grid();
  const std::size_t n = g.n_points;
  const double dx = g.dx;
  const double q = params.p + 1.0;

  double grad2 = 0.0, u2 = 0.0, ut2 = 0.0, pot = 0.0, linf = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double ux;
    if (j == 0) {
      ux = (u[1] - u[0]) / dx;
    } else if (j == n - 1) {
      ux = (u[n - 1] - u[n - 2]) / dx;
    } else {
      ux = (u[j + 1] - u[j - 1]) / (2.0 * dx);
    }
    grad2 += ux * ux;
    u2 += u[j] * u[j];
    ut2 += ut[j] * ut[j];
    pot += abs_pow(u[j], q);
    linf = std::max(linf, std::fabs(u[j]));
  }
  Norms out;
  out.h1 = std::sqrt(dx * (u2 + grad2));
  out.l2 = std::sqrt(dx * ut2);
  out.linf = linf;
  out.lp1 = std::pow(dx * pot, 1.0 / q);
  out.energy = dx * (0.5 * ut2 + 0.5 * grad2);
  if (params.defocusing_on) out.energy += dx * pot / q;
  return out;
}

namespace {

double gaussian_shape(double x, double a, double c, double w) {
  const double s = (x - c) / w;
  if (std::fabs(s) > kGaussianCutoff) return 0.0;
  return a * std::exp(-s * s);
}

double bump_shape(double x, double c, double w) {
  const double s = (x - c) / w;
  if (std::fabs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

struct Sampler {
  const Grid& grid;
  std::vector<double> u;
  std::vector<double> ut;

  explicit Sampler(const Grid& g) : grid(g), u(g.n_points, 0.0), ut(g.n_points, 0.0) {}

  std::vector<double>& operator()(const GaussianProfile& p) {
    for (std::size_t j = 1; j + 1 < grid.n_points; ++j) {
      u[j] = gaussian_shape(grid.x(j), p.amplitude, p.center, p.width);
    }
    return u;
  }
  std::vector<double>& operator()(const TravelingProfile& p) {
    if (p.direction != 1 && p.direction != -1) {
      throw InvalidInput("traveling profile: direction must be +1 or -1");
    }
    for (std::size_t j = 1; j + 1 < grid.n_points; ++j) {
      u[j] = gaussian_shape(grid.x(j), p.amplitude, p.center, p.width);
    }
    const double dir = static_cast<double>(p.direction);
    for (std::size_t j = 1; j + 1 < grid.n_points; ++j) {
      ut[j] = -dir * (u[j + 1] - u[j - 1]) / (2.0 * grid.dx);
    }
    return u;
  }
  std::vector<double>& operator()(const BumpProfile& p) {
    for (std::size_t j = 1; j + 1 < grid.n_points; ++j) {
      u[j] = p.amplitude * bump_shape(grid.x(j), p.center, p.width);
    }
    return u;
  }
  std::vector<double>& operator()(const FilteredNoiseProfile& p) {
    if (p.modes < 1 || !(p.cutoff > 0.0)) throw InvalidInput("filtered_noise: need modes >= 1, cutoff > 0");
    Rng rng(p.seed);
    std::vector<double> k(p.modes), phase(p.modes), amp(p.modes);
    for (int m = 0; m < p.modes; ++m) {
      k[m] = p.cutoff * (1.0 - rng.uniform());
      phase[m] = 2.0 * std::numbers::pi * rng.uniform();
      amp[m] = rng.uniform(0.5, 1.0);
    }
    double peak = 0.0;
    for (std::size_t j = 1; j + 1 < grid.n_points; ++j) {
      const double x = grid.x(j);
      const double env = bump_shape(x, p.center, p.width);
      if (env == 0.0) continue;
      double s = 0.0;
      for (int m = 0; m < p.modes; ++m) s += amp[m] * std::cos(k[m] * (x - p.center) + phase[m]);
      u[j] = env * s;
      peak = std::max(peak, std::fabs(u[j]));
    }
    if (peak > 0.0) {
      for (double& v : u) v *= p.amplitude / peak;
    }
    return u;
  }
  std::vector<double>& operator()(const ZeroProfile&) { return u; }
};

}  // namespace

double support_radius(const ProfileSpec& profile) {
  return std::visit(
      [](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GaussianProfile> || std::is_same_v<P, TravelingProfile>) {
          return kGaussianCutoff * p.width;
        } else if constexpr (std::is_same_v<P, ZeroProfile>) {
          return 0.0;
        } else {
          return p.width;
        }
      },
      profile);
}

double profile_center(const ProfileSpec& profile) {
  return std::visit(
      [](const auto& p) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, ZeroProfile>) {
          return 0.0;
        } else {
          return p.center;
        }
      },
      profile);
}

FieldState initial_data(const ProfileSpec& profile, const Grid& grid) {
  std::visit(
      [](const auto& p) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(p)>, ZeroProfile>) {
          if (!(p.width > 0.0) || !std::isfinite(p.center) || !std::isfinite(p.amplitude)) {
            throw InvalidInput("profile: need finite center/amplitude and width > 0");
          }
        }
      },
      profile);

  const double r = support_radius(profile);
  const double c = profile_center(profile);
  if (r > 0.0) {
    const double lo = grid.x_min + 2.0 * grid.dx;
    const double hi = grid.x_max - 2.0 * grid.dx;
    if (c - r < lo || c + r > hi) {
      std::ostringstream msg;
      msg << "initial_data: profile support [" << c - r << ", " << c + r
          << "] reaches the boundary padding of [" << grid.x_min << ", " << grid.x_max << "]";
      throw PaddingViolation(msg.str());
    }
  }

  Sampler sampler(grid);
  std::visit(sampler, profile);
  FieldState state(grid, 0.0, std::move(sampler.u), std::move(sampler.ut));
  const auto [first, last] = state.support();
  if (first <= last && (first < 2 || last + 3 > grid.n_points)) {
    throw PaddingViolation("initial_data: sampled support touches the boundary padding");
  }
  return state;
}

}  // namespace nlw
