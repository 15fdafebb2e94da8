#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nlw/field.hpp"

namespace nlw {

struct SolverParams {
  double cfl = 0.5;
  double newton_tol = 1e-13;
  int newton_max_iter = 60;
  int record_stride = 1;

  double dt(const Grid& grid) const { return cfl * grid.dx; }
  void validate() const;
};

/// Potential difference quotient (|a|^{p+1} - |b|^{p+1}) / ((p+1)(a-b)),
/// extended continuously by |a|^{p-1}a on the diagonal. Equivalently the mean
/// of |s|^{p-1}s over s in [b, a].
double nonlinear_difference_quotient(double a, double b, double p);

/// Derivative of nonlinear_difference_quotient with respect to `a`.
double nonlinear_difference_quotient_da(double a, double b, double p);

/// Root x of x + dt2 * G(x, b, p) = c, the per-point implicit equation of
/// the scheme. The map is strictly increasing, so the root is unique and is
/// bracketed by [c - f(c), c] (or its mirror). Safeguarded Newton with one
/// extra correction after the residual drops below `tol`; throws
/// NumericalFault after `max_iter` iterations.
double solve_implicit_point(double c, double b, double dt2, double p, double tol, int max_iter);

/// One step of the conservative scheme
///   (u_next - 2 u_curr + u_prev)/dt^2 = D^2 u_curr - G(u_next, u_prev)
/// with u held at zero on both boundary points. With defocusing_on = false this
/// is exactly the explicit leapfrog update.
class Stepper {
 public:
  Stepper(const Grid& grid, const ModelParams& model, const SolverParams& solver);

  void step(std::span<const double> prev, std::span<const double> curr, std::span<double> next) const;

  double dt() const { return dt_; }
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  ModelParams model_;
  SolverParams solver_;
  double dt_;
  double lam2_;
  bool odd_integer_p_;
};

std::vector<double> step(std::span<const double> prev, std::span<const double> curr, const Grid& grid,
                         const ModelParams& model, const SolverParams& solver);

/// Discrete energy of the level pair (prev, curr), conserved by the scheme:
///   sum dx [ ((curr-prev)/dt)^2/2 + D+curr * D+prev / 2 + (Phi(curr)+Phi(prev))/2 ]
/// with Phi(u) = |u|^{p+1}/(p+1) (omitted in linear mode).
double discrete_energy(std::span<const double> prev, std::span<const double> curr, const Grid& grid,
                       const ModelParams& model, double dt);

/// A stored frame: level u0 at time t0 and the next level u1 at time t1.
/// For backward-in-time views t1 < t0.
struct FrameRef {
  double t0 = 0.0;
  std::span<const double> u0;
  double t1 = 0.0;
  std::span<const double> u1;

  double t_mid() const { return 0.5 * (t0 + t1); }
};

using Observer = std::function<void(const FrameRef&)>;

/// Append-only record of stored level pairs. Frame k holds the levels at steps
/// k*stride and k*stride + 1.
class Trajectory {
 public:
  Trajectory(Grid grid, ModelParams model, SolverParams solver);

  void append(double t, std::span<const double> level0, std::span<const double> level1);

  const Grid& grid() const { return grid_; }
  const ModelParams& model() const { return model_; }
  const SolverParams& solver() const { return solver_; }
  double dt() const { return solver_.dt(grid_); }

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double time(std::size_t k) const { return times_[k]; }
  std::span<const double> times() const { return times_; }
  std::span<const double> level0(std::size_t k) const;
  std::span<const double> level1(std::size_t k) const;
  FrameRef frame(std::size_t k) const;
  double energy(std::size_t k) const { return energy_[k]; }
  std::span<const double> energy_series() const { return energy_; }

 private:
  Grid grid_;
  ModelParams model_;
  SolverParams solver_;
  std::vector<double> times_;
  std::vector<double> levels_;
  std::vector<double> energy_;
};

/// First level pair (u0, u0 + dt ut0 + dt^2/2 (D^2 u0 - |u0|^{p-1}u0)).
std::pair<std::vector<double>, std::vector<double>> taylor_start(const FieldState& initial,
                                                                 const ModelParams& model, double dt);

/// Runs the scheme from `initial` until the last stored frame time reaches
/// t_final. Rejects data whose light cone over [0, t_final] (plus one unit)
/// leaves the padded domain.
Trajectory evolve(const FieldState& initial, double t_final, const ModelParams& model,
                  const SolverParams& solver, const Observer& observer = {});

/// Runs `n_frames` stored frames from an explicit level pair at time t_start.
/// Used for time reversal (pass the last pair swapped).
Trajectory evolve_levels(const Grid& grid, double t_start, std::vector<double> prev, std::vector<double> curr,
                         std::size_t n_frames, const ModelParams& model, const SolverParams& solver,
                         const Observer& observer = {});

/// Forward run plus the run from the same data with u_t negated, which is the
/// solution at negative times reflected.
struct SymmetricRun {
  Trajectory forward;
  Trajectory backward;
};

SymmetricRun evolve_symmetric(const FieldState& initial, double t_final, const ModelParams& model,
                              const SolverParams& solver);

}  // namespace nlw
