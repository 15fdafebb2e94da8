#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace nlw {

/// Uniform grid on [x_min, x_max]. The end points are grid points.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;
  std::size_t n_points = 0;

  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }
  /// Nearest grid index to `x`, clamped to the grid.
  std::size_t index_of(double x) const;
  double length() const { return x_max - x_min; }

  bool operator==(const Grid&) const = default;
};

inline constexpr double kMaxGridIntervals = 1e8;

/// Throws InvalidInput for non-finite or inverted bounds and dx <= 0,
/// ResourceLimit when (x_max - x_min)/dx exceeds kMaxGridIntervals.
Grid make_grid(double x_min, double x_max, double dx);

/// Symmetric grid [-half_width', half_width'] where half_width' is half_width
/// rounded up to a multiple of dx.
Grid make_symmetric_grid(double half_width, double dx);

struct ModelParams {
  double p = 3.0;
  bool defocusing_on = true;

  void validate() const;
};

// |a|^q with fast paths for the small even integer powers that dominate the
// hot loops.
inline double abs_pow(double a, double q) {
  if (q == 4.0) {
    const double s = a * a;
    return s * s;
  }
  if (q == 2.0) return a * a;
  if (q == 6.0) {
    const double s = a * a;
    return s * s * s;
  }
  return std::pow(std::fabs(a), q);
}

/// |u|^{p+1}/(p+1)
inline double potential(double u, double p) { return abs_pow(u, p + 1.0) / (p + 1.0); }

/// |u|^{p-1} u
inline double nonlinearity(double u, double p) {
  if (p == 3.0) return u * u * u;
  return std::copysign(std::pow(std::fabs(u), p), u);
}

/// Field (u, u_t) at one time level. Boundary values are zero and all
/// samples finite; the constructor enforces both.
class FieldState {
 public:
  FieldState(Grid grid, double t, std::vector<double> u, std::vector<double> ut);

  const Grid& grid() const { return grid_; }
  double t() const { return t_; }
  std::span<const double> u() const { return u_; }
  std::span<const double> ut() const { return ut_; }

  /// [first, last] indices where u or ut is nonzero; nullopt-like empty
  /// range is reported as first > last.
  std::pair<std::size_t, std::size_t> support() const;

 private:
  Grid grid_;
  double t_;
  std::vector<double> u_;
  std::vector<double> ut_;
};

struct Norms {
  double h1 = 0.0;      // ||u||_{H^1}
  double l2 = 0.0;      // ||u_t||_{L^2}
  double linf = 0.0;    // max |u|
  double lp1 = 0.0;     // ||u||_{L^{p+1}}
  double energy = 0.0;  // sum dx (ut^2/2 + ux^2/2 + |u|^{p+1}/(p+1))
};

Norms norms(const FieldState& state, const ModelParams& params);

// Initial-data profiles. Every profile is compactly supported; the
// support half-width is reported by support_radius().

/// A exp(-(x-x0)^2/w^2), truncated to zero for |x-x0| > 6w. u_t = 0.
struct GaussianProfile {
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
};

/// Gaussian shape with u_t = -direction * u_x (central differences), so the
/// linear flow transports it with speed `direction`.
struct TravelingProfile {
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
  int direction = 1;
};

/// A exp(1 - 1/(1 - s^2)), s = (x-x0)/w, on |s| < 1: smooth with exact support
/// [x0-w, x0+w]. u_t = 0.
struct BumpProfile {
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
};

/// Sum of `modes` random cosines with wavenumbers in (0, cutoff] under the
/// bump envelope of half-width `width`, rescaled so max |u| = amplitude.
struct FilteredNoiseProfile {
  std::uint64_t seed = 1;
  double cutoff = 4.0;
  double amplitude = 1.0;
  double center = 0.0;
  double width = 4.0;
  int modes = 16;
};

struct ZeroProfile {};

using ProfileSpec =
    std::variant<GaussianProfile, TravelingProfile, BumpProfile, FilteredNoiseProfile, ZeroProfile>;

inline constexpr double kGaussianCutoff = 6.0;

double support_radius(const ProfileSpec& profile);
double profile_center(const ProfileSpec& profile);

/// Samples the profile at t = 0. Throws PaddingViolation unless at least two
/// zero cells separate the support from each boundary.
FieldState initial_data(const ProfileSpec& profile, const Grid& grid);

}  // namespace nlw
