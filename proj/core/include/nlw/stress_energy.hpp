#pragma once

#include <cstddef>
#include <vector>

#include "nlw/field.hpp"
#include "nlw/integrator.hpp"
#include "nlw/spacetime.hpp"

namespace nlw {

/// Stress-energy components at one time.
///   T00 = ut^2/2 + ux^2/2 + |u|^{p+1}/(p+1)   energy density
///   T01 = ut ux                                momentum density (= T10)
///   T11 = ut^2/2 + ux^2/2 - |u|^{p+1}/(p+1)   momentum current
///   Q   = -2 ut^2 + 2 ux^2 + 2 |u|^{p+1}       null form (-d_tt + d_xx) u^2
/// In linear mode the |u|^{p+1} terms are dropped.
struct DensityPoint {
  double T00 = 0.0;
  double T01 = 0.0;
  double T11 = 0.0;
  double Q = 0.0;
};

DensityPoint densities_at(double ut, double ux, double u, const ModelParams& model);

/// Gridded densities of a frame, evaluated at the frame's midpoint time with
/// u = (u0 + u1)/2, ut = (u1 - u0)/(t1 - t0) and ux by central differences of
/// the averaged level; all three are second-order accurate at t_mid.
struct StressEnergyFields {
  Grid grid;
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> T00;
  std::vector<double> T01;
  std::vector<double> T11;
  std::vector<double> Q;
};

StressEnergyFields densities(const FrameRef& frame, const Grid& grid, const ModelParams& model);

/// C^2 bump: 1 on [-1, 1], 1 - S(|x| - 1) on 1 <= |x| <= 2 with the quintic
/// smoothstep S(s) = 6s^5 - 15s^4 + 10s^3, and 0 beyond. psi is its
/// antiderivative from -infinity, so psi(2) = integral = 3.
struct WindowFunction {
  static double chi(double x);
  static double chi_d1(double x);
  static double chi_d2(double x);
  static double psi(double x);
  static constexpr double integral = 3.0;
};

/// Slab {|t - t0| <= T, |x - x0 - v (t - t0)| <= R} with T >= R >= 1.
struct ParallelogramSpec {
  double t0 = 0.0;
  double x0 = 0.0;
  double v = 0.0;
  double R = 1.0;
  double T = 1.0;

  void validate() const;
  /// R^{1/2} T^{1/2} + T/R
  double envelope() const;
};

struct ConservationResiduals {
  double t = 0.0;
  double r_energy = 0.0;    // max_j |d_t T00 - d_x T01|
  double r_momentum = 0.0;  // max_j |d_t T01 - d_x T11|
};

/// Residuals at `frame` using the neighbouring frames for the time derivative.
/// Throws InvalidInput if the frame has no neighbour on either side.
ConservationResiduals conservation_residuals(const Spacetime& st, std::size_t frame);

/// conservation_residuals for every frame that has two neighbours.
std::vector<ConservationResiduals> conservation_series(const Spacetime& st);

/// Trapezoid integral of |u(t, x0 + direction t)|^{p+1} over the recorded
/// span, with u interpolated linearly in x at each level.
double light_ray_flux(const Spacetime& st, double x0, int direction);

/// Sharp-cutoff integral of |u|^{p+1} over the slab: rectangle rule in x,
/// trapezoid in t.
double parallelogram_integral(const Spacetime& st, const ParallelogramSpec& spec);

/// Window W(t, x) = chi((t - t0)/T) chi((x - x0 - v(t - t0))/R).
///   I1 = iint W (T11 + v T01)
///   I2 = iint W (T01 + v T00)
///   I3_direct = iint W Q
///   I3_weak   = iint u^2 (-d_tt + d_xx) W    (window derivatives in closed form)
struct WindowedFunctionals {
  double I1 = 0.0;
  double I2 = 0.0;
  double I3_direct = 0.0;
  double I3_weak = 0.0;
};

WindowedFunctionals windowed_flux_functionals(const Spacetime& st, const ParallelogramSpec& spec);

/// Both sides of
///   (T11 + v T01) + v (T01 + v T00) + (1 - v^2)/4 Q
///     = (v ut + ux)^2 + (p-1)(1-v^2)/(2(p+1)) |u|^{p+1}.
struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double absolute() const;
  /// |lhs - rhs| / (1 + |lhs|)
  double relative() const;
};

IdentityResidual case3_identity_residual(double ut, double ux, double u, double v, double p);

/// Pointwise comparisons of |u|^{p+1} against T01 + v T00:
///   spacelike (v >= 1):  |u|^{p+1}/(p+1) <= T01 + v T00
///   0 < v < 1:           v |u|^{p+1}/(p+1) <= (T01 + v T00) + (1 - v) T00
/// Margins are right side minus left side.
struct CaseBoundsReport {
  bool spacelike_applicable = false;
  bool spacelike_holds = true;
  double spacelike_margin = 0.0;
  bool lightlike_applicable = false;
  bool lightlike_holds = true;
  double lightlike_margin = 0.0;
};

CaseBoundsReport case_bounds_check(double ut, double ux, double u, double v, double p);

/// d/dt of the half-line energy H(t) = int_{x < x0 + t} T00 against the flux
/// T00 + T01 at x = x0 + t, over the interior frames of the view.
struct EnergyFluxReport {
  double max_residual = 0.0;
  double min_half_energy = 0.0;
  /// max over frames of H / int T00 (at most 1)
  double max_half_fraction = 0.0;
  /// max over frames of int T00 / E_h(0)
  double max_total_over_energy = 0.0;
};

EnergyFluxReport energy_flux_identity(const Spacetime& st, double x0);

}  // namespace nlw
