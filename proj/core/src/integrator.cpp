#include "nlw/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "nlw/errors.hpp"

namespace nlw {

void SolverParams::validate() const {
  if (!(cfl > 0.0) || !(cfl <= 0.95)) throw InvalidInput("SolverParams: need 0 < cfl <= 0.95");
  if (!(newton_tol > 0.0)) throw InvalidInput("SolverParams: need newton_tol > 0");
  if (newton_max_iter < 1) throw InvalidInput("SolverParams: need newton_max_iter >= 1");
  if (record_stride < 1) throw InvalidInput("SolverParams: need record_stride >= 1");
}

namespace {

bool is_odd_integer(double p) {
  return p == std::floor(p) && p >= 1.0 && p <= 15.0 && static_cast<long>(p) % 2 == 1;
}

// For odd integer p the potential is the polynomial u^{p+1}/(p+1) and the
// quotient is the exact symmetric sum (sum_k a^k b^{p-k}) / (p+1).
double odd_poly_quotient(double a, double b, int p) {
  double s = 1.0;
  double bp = 1.0;
  for (int k = p - 1; k >= 0; --k) {
    bp *= b;
    s = s * a + bp;
  }
  return s / (p + 1);
}

double odd_poly_quotient_da(double a, double b, int p) {
  // d/da sum_{k=0}^{p} a^k b^{p-k} = sum_{k=1}^{p} k a^{k-1} b^{p-k}
  double s = static_cast<double>(p);
  double bp = 1.0;
  for (int k = p - 1; k >= 1; --k) {
    bp *= b;
    s = s * a + k * bp;
  }
  return s / (p + 1);
}

double general_quotient(double a, double b, double p) {
  const double h = a - b;
  const double m = 0.5 * (a + b);
  if (a * b > 0.0 && std::fabs(h) <= 1e-3 * std::fabs(m)) {
    // Mean of phi over [b, a] expanded about the midpoint.
    const double am = std::fabs(m);
    const double phi = std::copysign(std::pow(am, p), m);
    const double phi2 = p * (p - 1.0) * std::copysign(std::pow(am, p - 2.0), m);
    const double phi4 = p * (p - 1.0) * (p - 2.0) * (p - 3.0) * std::copysign(std::pow(am, p - 4.0), m);
    const double h2 = h * h;
    return phi + phi2 * h2 / 24.0 + phi4 * h2 * h2 / 1920.0;
  }
  if (std::fabs(h) > 1e-14 * std::max({1.0, std::fabs(a), std::fabs(b)})) {
    const double q = p + 1.0;
    return (std::pow(std::fabs(a), q) - std::pow(std::fabs(b), q)) / (q * h);
  }
  return std::copysign(std::pow(std::fabs(m), p), m);
}

double general_quotient_da(double a, double b, double p) {
  const double h = a - b;
  const double m = 0.5 * (a + b);
  if (std::fabs(h) <= 1e-3 * std::fabs(m) || std::fabs(h) <= 1e-14) {
    const double am = std::fabs(m);
    const double d1 = p * std::pow(am, p - 1.0);
    const double d2 = am > 0.0 ? p * (p - 1.0) * std::copysign(std::pow(am, p - 2.0), m) : 0.0;
    return 0.5 * d1 + d2 * h / 12.0;
  }
  const double phi_a = std::copysign(std::pow(std::fabs(a), p), a);
  return (phi_a - general_quotient(a, b, p)) / h;
}

struct CubicPolicy {
  static double g(double a, double b, double) { return 0.25 * (a + b) * (a * a + b * b); }
  static double ga(double a, double b, double) { return 0.25 * (3.0 * a * a + 2.0 * a * b + b * b); }
};

struct OddIntegerPolicy {
  static double g(double a, double b, double p) { return odd_poly_quotient(a, b, static_cast<int>(p)); }
  static double ga(double a, double b, double p) { return odd_poly_quotient_da(a, b, static_cast<int>(p)); }
};

struct GeneralPolicy {
  static double g(double a, double b, double p) { return general_quotient(a, b, p); }
  static double ga(double a, double b, double p) { return general_quotient_da(a, b, p); }
};

template <class Policy>
double solve_point(double c, double b, double dt2, double p, double tol, int max_iter) {
  const double fc = dt2 * Policy::g(c, b, p);
  if (fc == 0.0) return c;
  double lo = fc > 0.0 ? c - fc : c;
  double hi = fc > 0.0 ? c : c - fc;
  const double scaled_tol = tol * std::max(1.0, std::fabs(c));
  double x = c - fc;
  for (int it = 0; it < max_iter; ++it) {
    const double r = x + dt2 * Policy::g(x, b, p) - c;
    // One more Newton correction once inside the tolerance: convergence is
    // quadratic, so this lands at roundoff level and keeps the discrete
    // energy drift from accumulating the stopping error.
    if (std::fabs(r) <= scaled_tol) return x - r / (1.0 + dt2 * Policy::ga(x, b, p));
    if (r > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi))) {
      return x;
    }
    double next = x - r / (1.0 + dt2 * Policy::ga(x, b, p));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  std::ostringstream msg;
  msg << "implicit solve did not converge in " << max_iter << " iterations (c=" << c << ", b=" << b << ")";
  throw NumericalFault(msg.str());
}

template <class Policy>
void nonlinear_sweep(std::span<const double> up, std::span<const double> uc, std::span<double> un, double lam2,
                     double dt2, double p, double tol, int max_iter) {
  const std::size_t n = uc.size();
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double c = 2.0 * uc[j] - up[j] + lam2 * (uc[j + 1] - 2.0 * uc[j] + uc[j - 1]);
    const double b = up[j];
    if (!std::isfinite(c)) {
      throw NumericalFault("step: non-finite value at grid index " + std::to_string(j));
    }
    un[j] = (c == 0.0 && b == 0.0) ? 0.0 : solve_point<Policy>(c, b, dt2, p, tol, max_iter);
  }
}

}  // namespace

double nonlinear_difference_quotient(double a, double b, double p) {
  if (p == 3.0) return CubicPolicy::g(a, b, p);
  if (is_odd_integer(p)) return OddIntegerPolicy::g(a, b, p);
  return GeneralPolicy::g(a, b, p);
}

double nonlinear_difference_quotient_da(double a, double b, double p) {
  if (p == 3.0) return CubicPolicy::ga(a, b, p);
  if (is_odd_integer(p)) return OddIntegerPolicy::ga(a, b, p);
  return GeneralPolicy::ga(a, b, p);
}

double solve_implicit_point(double c, double b, double dt2, double p, double tol, int max_iter) {
  if (p == 3.0) return solve_point<CubicPolicy>(c, b, dt2, p, tol, max_iter);
  if (is_odd_integer(p)) return solve_point<OddIntegerPolicy>(c, b, dt2, p, tol, max_iter);
  return solve_point<GeneralPolicy>(c, b, dt2, p, tol, max_iter);
}

Stepper::Stepper(const Grid& grid, const ModelParams& model, const SolverParams& solver)
    : grid_(grid), model_(model), solver_(solver) {
  model_.validate();
  solver_.validate();
  dt_ = solver_.dt(grid_);
  lam2_ = (dt_ * dt_) / (grid_.dx * grid_.dx);
  odd_integer_p_ = is_odd_integer(model_.p);
}

void Stepper::step(std::span<const double> prev, std::span<const double> curr, std::span<double> next) const {
  const std::size_t n = grid_.n_points;
  if (prev.size() != n || curr.size() != n || next.size() != n) {
    throw InvalidInput("Stepper::step: level size does not match grid");
  }
  next[0] = 0.0;
  next[n - 1] = 0.0;
  if (!model_.defocusing_on) {
    for (std::size_t j = 1; j + 1 < n; ++j) {
      next[j] = 2.0 * curr[j] - prev[j] + lam2_ * (curr[j + 1] - 2.0 * curr[j] + curr[j - 1]);
    }
    for (std::size_t j = 1; j + 1 < n; ++j) {
      if (!std::isfinite(next[j])) throw NumericalFault("step: non-finite value at grid index " + std::to_string(j));
    }
    return;
  }
  const double dt2 = dt_ * dt_;
  const double p = model_.p;
  const double tol = solver_.newton_tol;
  const int it = solver_.newton_max_iter;
  if (p == 3.0) {
    nonlinear_sweep<CubicPolicy>(prev, curr, next, lam2_, dt2, p, tol, it);
  } else if (odd_integer_p_) {
    nonlinear_sweep<OddIntegerPolicy>(prev, curr, next, lam2_, dt2, p, tol, it);
  } else {
    nonlinear_sweep<GeneralPolicy>(prev, curr, next, lam2_, dt2, p, tol, it);
  }
}

std::vector<double> step(std::span<const double> prev, std::span<const double> curr, const Grid& grid,
                         const ModelParams& model, const SolverParams& solver) {
  std::vector<double> next(grid.n_points, 0.0);
  Stepper(grid, model, solver).step(prev, curr, next);
  return next;
}

double discrete_energy(std::span<const double> prev, std::span<const double> curr, const Grid& grid,
                       const ModelParams& model, double dt) {
  const std::size_t n = grid.n_points;
  if (prev.size() != n || curr.size() != n) throw InvalidInput("discrete_energy: level size mismatch");
  const double dx = grid.dx;
  const double q = model.p + 1.0;
  double kinetic = 0.0, gradient = 0.0, pot = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = (curr[j] - prev[j]) / dt;
    kinetic += v * v;
    if (model.defocusing_on) pot += abs_pow(curr[j], q) + abs_pow(prev[j], q);
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    gradient += (curr[j + 1] - curr[j]) * (prev[j + 1] - prev[j]);
  }
  return dx * (0.5 * kinetic + gradient / (2.0 * dx * dx) + pot / (2.0 * q));
}

Trajectory::Trajectory(Grid grid, ModelParams model, SolverParams solver)
    : grid_(grid), model_(model), solver_(solver) {}

void Trajectory::append(double t, std::span<const double> level0, std::span<const double> level1) {
  const std::size_t n = grid_.n_points;
  if (level0.size() != n || level1.size() != n) throw InvalidInput("Trajectory::append: level size mismatch");
  if (!times_.empty() && !(t > times_.back())) throw InvalidInput("Trajectory::append: times must increase");
  if (level0.front() != 0.0 || level0.back() != 0.0 || level1.front() != 0.0 || level1.back() != 0.0) {
    throw InvalidInput("Trajectory::append: boundary values must be zero");
  }
  times_.push_back(t);
  levels_.insert(levels_.end(), level0.begin(), level0.end());
  levels_.insert(levels_.end(), level1.begin(), level1.end());
  energy_.push_back(discrete_energy(level0, level1, grid_, model_, dt()));
}

std::span<const double> Trajectory::level0(std::size_t k) const {
  const std::size_t n = grid_.n_points;
  return std::span<const double>(levels_).subspan(2 * k * n, n);
}

std::span<const double> Trajectory::level1(std::size_t k) const {
  const std::size_t n = grid_.n_points;
  return std::span<const double>(levels_).subspan((2 * k + 1) * n, n);
}

FrameRef Trajectory::frame(std::size_t k) const {
  return FrameRef{times_[k], level0(k), times_[k] + dt(), level1(k)};
}

std::pair<std::vector<double>, std::vector<double>> taylor_start(const FieldState& initial,
                                                                 const ModelParams& model, double dt) {
  const Grid& g = initial.grid();
  const std::size_t n = g.n_points;
  const auto u0 = initial.u();
  const auto ut0 = initial.ut();
  std::vector<double> a(u0.begin(), u0.end());
  std::vector<double> b(n, 0.0);
  const double inv_dx2 = 1.0 / (g.dx * g.dx);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    double acc = (u0[j + 1] - 2.0 * u0[j] + u0[j - 1]) * inv_dx2;
    if (model.defocusing_on) acc -= nonlinearity(u0[j], model.p);
    b[j] = u0[j] + dt * ut0[j] + 0.5 * dt * dt * acc;
  }
  return {std::move(a), std::move(b)};
}

Trajectory evolve_levels(const Grid& grid, double t_start, std::vector<double> prev, std::vector<double> curr,
                         std::size_t n_frames, const ModelParams& model, const SolverParams& solver,
                         const Observer& observer) {
  const Stepper stepper(grid, model, solver);
  Trajectory traj(grid, model, solver);
  std::vector<double> next(grid.n_points, 0.0);
  const auto stride = static_cast<std::size_t>(solver.record_stride);
  const double dt = stepper.dt();
  for (std::size_t k = 0; k < n_frames; ++k) {
    const double t = t_start + static_cast<double>(k * stride) * dt;
    traj.append(t, prev, curr);
    if (observer) observer(traj.frame(traj.size() - 1));
    if (k + 1 == n_frames) break;
    for (std::size_t s = 0; s < stride; ++s) {
      stepper.step(prev, curr, next);
      std::swap(prev, curr);
      std::swap(curr, next);
    }
  }
  return traj;
}

Trajectory evolve(const FieldState& initial, double t_final, const ModelParams& model,
                  const SolverParams& solver, const Observer& observer) {
  model.validate();
  solver.validate();
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw InvalidInput("evolve: need t_final > 0");
  const Grid& g = initial.grid();
  const auto [lo, hi] = initial.support();
  if (lo <= hi) {
    const double left = g.x(lo) - t_final - 1.0;
    const double right = g.x(hi) + t_final + 1.0;
    if (left < g.x_min + g.dx || right > g.x_max - g.dx) {
      std::ostringstream msg;
      msg << "evolve: light cone [" << left << ", " << right << "] of the data over t <= " << t_final
          << " leaves the domain [" << g.x_min << ", " << g.x_max << "]";
      throw PaddingViolation(msg.str());
    }
  }
  const double dt = solver.dt(g);
  const double frame_dt = dt * solver.record_stride;
  const auto n_frames = static_cast<std::size_t>(std::ceil(t_final / frame_dt - 1e-9)) + 1;
  auto [u0, u1] = taylor_start(initial, model, dt);
  return evolve_levels(g, initial.t(), std::move(u0), std::move(u1), n_frames, model, solver, observer);
}

SymmetricRun evolve_symmetric(const FieldState& initial, double t_final, const ModelParams& model,
                              const SolverParams& solver) {
  const auto ut = initial.ut();
  std::vector<double> neg(ut.size());
  std::transform(ut.begin(), ut.end(), neg.begin(), [](double v) { return -v; });
  const FieldState reversed(initial.grid(), initial.t(), std::vector<double>(initial.u().begin(), initial.u().end()),
                            std::move(neg));
  return SymmetricRun{evolve(initial, t_final, model, solver), evolve(reversed, t_final, model, solver)};
}

}  // namespace nlw
