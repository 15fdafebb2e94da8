#include "nlw/stress_energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlw/errors.hpp"

namespace nlw {

namespace {

// Weights of the three-point derivative at tm from samples at ta < tm < tb;
// second-order accurate on uneven spacing (the symmetric view has a short
// step across t = 0).
struct ThreePoint {
  double wa, wm, wb;
  ThreePoint(double ta, double tm, double tb) {
    const double h1 = tm - ta, h2 = tb - tm;
    wa = -h2 / (h1 * (h1 + h2));
    wm = (h2 - h1) / (h1 * h2);
    wb = h1 / (h2 * (h1 + h2));
  }
  double operator()(double fa, double fm, double fb) const { return wa * fa + wm * fm + wb * fb; }
};

// Pointwise (u, ut, ux) of a frame at its midpoint time.
struct FrameSampler {
  const FrameRef& f;
  const Grid& g;
  double inv_dt;

  FrameSampler(const FrameRef& frame, const Grid& grid) : f(frame), g(grid), inv_dt(1.0 / (frame.t1 - frame.t0)) {}

  double u(std::size_t j) const { return 0.5 * (f.u0[j] + f.u1[j]); }
  double ut(std::size_t j) const { return (f.u1[j] - f.u0[j]) * inv_dt; }
  double ux(std::size_t j) const {
    const std::size_t n = g.n_points;
    if (j == 0) return (u(1) - u(0)) / g.dx;
    if (j == n - 1) return (u(n - 1) - u(n - 2)) / g.dx;
    return (u(j + 1) - u(j - 1)) / (2.0 * g.dx);
  }
  DensityPoint at(std::size_t j, const ModelParams& m) const { return densities_at(ut(j), ux(j), u(j), m); }
};

double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_d1(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double smoothstep_d2(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }
// int_0^s S = s^6 - 3 s^5 + 5/2 s^4
double smoothstep_int(double s) { return s * s * s * s * (2.5 + s * (-3.0 + s)); }

// Grid index range [lo, hi] of points with lo_x <= x_j <= hi_x.
std::pair<std::size_t, std::size_t> index_range(const Grid& g, double lo_x, double hi_x) {
  const double a = std::ceil((lo_x - g.x_min) / g.dx - 1e-9);
  const double b = std::floor((hi_x - g.x_min) / g.dx + 1e-9);
  const double last = static_cast<double>(g.n_points - 1);
  const double ca = std::clamp(a, 0.0, last);
  const double cb = std::clamp(b, 0.0, last);
  return {static_cast<std::size_t>(ca), static_cast<std::size_t>(cb)};
}

void require_inside(const Grid& g, double lo_x, double hi_x, const char* what) {
  if (lo_x < g.x_min - 1e-9 || hi_x > g.x_max + 1e-9) {
    std::ostringstream msg;
    msg << what << ": spatial range [" << lo_x << ", " << hi_x << "] leaves the grid [" << g.x_min << ", "
        << g.x_max << "]";
    throw PaddingViolation(msg.str());
  }
}

}  // namespace

DensityPoint densities_at(double ut, double ux, double u, const ModelParams& model) {
  const double kin = 0.5 * ut * ut + 0.5 * ux * ux;
  const double q = model.p + 1.0;
  const double up = model.defocusing_on ? abs_pow(u, q) : 0.0;
  DensityPoint d;
  d.T00 = kin + up / q;
  d.T01 = ut * ux;
  d.T11 = kin - up / q;
  d.Q = -2.0 * ut * ut + 2.0 * ux * ux + 2.0 * up;
  return d;
}

StressEnergyFields densities(const FrameRef& frame, const Grid& grid, const ModelParams& model) {
  const FrameSampler s(frame, grid);
  const std::size_t n = grid.n_points;
  StressEnergyFields out;
  out.grid = grid;
  out.t = frame.t_mid();
  out.u.resize(n);
  out.T00.resize(n);
  out.T01.resize(n);
  out.T11.resize(n);
  out.Q.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const DensityPoint d = s.at(j, model);
    out.u[j] = s.u(j);
    out.T00[j] = d.T00;
    out.T01[j] = d.T01;
    out.T11[j] = d.T11;
    out.Q[j] = d.Q;
  }
  return out;
}

double WindowFunction::chi(double x) {
  const double a = std::fabs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return 1.0 - smoothstep(a - 1.0);
}

double WindowFunction::chi_d1(double x) {
  const double a = std::fabs(x);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  return -std::copysign(smoothstep_d1(a - 1.0), x);
}

double WindowFunction::chi_d2(double x) {
  const double a = std::fabs(x);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  return -smoothstep_d2(a - 1.0);
}

double WindowFunction::psi(double x) {
  if (x <= -2.0) return 0.0;
  if (x <= -1.0) {
    const double s = -x - 1.0;
    return 0.5 - s + smoothstep_int(s);
  }
  if (x <= 1.0) return 0.5 + (x + 1.0);
  if (x < 2.0) {
    const double s = x - 1.0;
    return 2.5 + s - smoothstep_int(s);
  }
  return integral;
}

void ParallelogramSpec::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(x0) || !std::isfinite(v)) {
    throw InvalidInput("ParallelogramSpec: non-finite parameter");
  }
  if (!(R >= 1.0) || !(T >= R)) throw InvalidInput("ParallelogramSpec: need T >= R >= 1");
}

double ParallelogramSpec::envelope() const { return std::sqrt(R * T) + T / R; }

ConservationResiduals conservation_residuals(const Spacetime& st, std::size_t frame) {
  if (frame == 0 || frame + 1 >= st.size()) {
    throw InvalidInput("conservation_residuals: frame needs neighbours on both sides");
  }
  const Grid& g = st.grid();
  const ModelParams& m = st.model();
  const FrameSampler before(st.frame(frame - 1), g);
  const FrameSampler here(st.frame(frame), g);
  const FrameSampler after(st.frame(frame + 1), g);
  const ThreePoint d_dt(st.frame(frame - 1).t_mid(), st.frame(frame).t_mid(), st.frame(frame + 1).t_mid());
  const std::size_t n = g.n_points;

  ConservationResiduals r;
  r.t = st.frame(frame).t_mid();
  for (std::size_t j = 2; j + 2 < n; ++j) {
    const DensityPoint a = after.at(j, m);
    const DensityPoint b = before.at(j, m);
    const DensityPoint c = here.at(j, m);
    const DensityPoint left = here.at(j - 1, m);
    const DensityPoint right = here.at(j + 1, m);
    const double dt_T00 = d_dt(b.T00, c.T00, a.T00);
    const double dt_T01 = d_dt(b.T01, c.T01, a.T01);
    const double dx_T01 = (right.T01 - left.T01) / (2.0 * g.dx);
    const double dx_T11 = (right.T11 - left.T11) / (2.0 * g.dx);
    r.r_energy = std::max(r.r_energy, std::fabs(dt_T00 - dx_T01));
    r.r_momentum = std::max(r.r_momentum, std::fabs(dt_T01 - dx_T11));
  }
  return r;
}

std::vector<ConservationResiduals> conservation_series(const Spacetime& st) {
  std::vector<ConservationResiduals> out;
  for (std::size_t k = 1; k + 1 < st.size(); ++k) out.push_back(conservation_residuals(st, k));
  return out;
}

double light_ray_flux(const Spacetime& st, double x0, int direction) {
  if (direction != 1 && direction != -1) throw InvalidInput("light_ray_flux: direction must be +1 or -1");
  const Grid& g = st.grid();
  const double q = st.model().p + 1.0;
  const double dir = static_cast<double>(direction);
  const double xa = x0 + dir * st.t_min();
  const double xb = x0 + dir * st.t_max();
  require_inside(g, std::min(xa, xb), std::max(xa, xb), "light_ray_flux");

  std::vector<double> t, f;
  for (std::size_t k : st.level_frames()) {
    const FrameRef& fr = st.frame(k);
    t.push_back(fr.t0);
    f.push_back(abs_pow(interpolate(g, fr.u0, x0 + dir * fr.t0), q));
  }
  if (t.size() < 2) return 0.0;
  return integrate_trapezoid(t, f, t.front(), t.back());
}

double parallelogram_integral(const Spacetime& st, const ParallelogramSpec& spec) {
  spec.validate();
  const Grid& g = st.grid();
  const double q = st.model().p + 1.0;
  const double a = spec.t0 - spec.T;
  const double b = spec.t0 + spec.T;
  const double slack = 1e-9 * std::max(1.0, std::fabs(b));
  if (a < st.t_min() - slack || b > st.t_max() + slack) {
    std::ostringstream msg;
    msg << "parallelogram_integral: time range [" << a << ", " << b << "] outside recorded ["
        << st.t_min() << ", " << st.t_max() << "]";
    throw PaddingViolation(msg.str());
  }
  for (double t : {a, b}) {
    const double c = spec.x0 + spec.v * (t - spec.t0);
    require_inside(g, c - spec.R, c + spec.R, "parallelogram_integral");
  }

  std::vector<double> t, f;
  const auto levels = st.level_frames();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const FrameRef& fr = st.frame(levels[i]);
    // Keep one sample on each side of [a, b] for the partial end intervals.
    const bool next_inside = i + 1 < levels.size() && st.frame(levels[i + 1]).t0 >= a;
    const bool prev_inside = i > 0 && st.frame(levels[i - 1]).t0 <= b;
    if (!(fr.t0 >= a && fr.t0 <= b) && !(fr.t0 < a && next_inside) && !(fr.t0 > b && prev_inside)) continue;
    const double c = spec.x0 + spec.v * (fr.t0 - spec.t0);
    const auto [lo, hi] = index_range(g, c - spec.R, c + spec.R);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += abs_pow(fr.u0[j], q);
    t.push_back(fr.t0);
    f.push_back(sum * g.dx);
  }
  if (t.size() < 2) throw InvalidInput("parallelogram_integral: fewer than two frames in the slab");
  return integrate_trapezoid(t, f, std::max(a, t.front()), std::min(b, t.back()));
}

WindowedFunctionals windowed_flux_functionals(const Spacetime& st, const ParallelogramSpec& spec) {
  spec.validate();
  const Grid& g = st.grid();
  const ModelParams& m = st.model();
  const double T = spec.T, R = spec.R, v = spec.v;
  const double a = spec.t0 - 2.0 * T;
  const double b = spec.t0 + 2.0 * T;
  if (a < st.mid_min() - 1e-9 || b > st.mid_max() + 1e-9) {
    std::ostringstream msg;
    msg << "windowed_flux_functionals: window time support [" << a << ", " << b << "] outside recorded ["
        << st.mid_min() << ", " << st.mid_max() << "]";
    throw PaddingViolation(msg.str());
  }
  for (double t : {a, b}) {
    const double c = spec.x0 + v * (t - spec.t0);
    require_inside(g, c - 2.0 * R - g.dx, c + 2.0 * R + g.dx, "windowed_flux_functionals");
  }

  std::vector<double> ts, f1, f2, f3, f4;
  for (std::size_t k = 0; k < st.size(); ++k) {
    const FrameRef& fr = st.frame(k);
    const double tm = fr.t_mid();
    const double tau = (tm - spec.t0) / T;
    if (tau <= -2.0 || tau >= 2.0) {
      // Zero samples just outside the support anchor the trapezoid ends.
      if ((tau <= -2.0 && k + 1 < st.size() && st.frame(k + 1).t_mid() > a) ||
          (tau >= 2.0 && k > 0 && st.frame(k - 1).t_mid() < b)) {
        ts.push_back(tm);
        f1.push_back(0.0);
        f2.push_back(0.0);
        f3.push_back(0.0);
        f4.push_back(0.0);
      }
      continue;
    }
    const double ct = WindowFunction::chi(tau);
    const double ct1 = WindowFunction::chi_d1(tau);
    const double ct2 = WindowFunction::chi_d2(tau);
    const double c = spec.x0 + v * (tm - spec.t0);
    const auto [lo, hi] = index_range(g, c - 2.0 * R, c + 2.0 * R);
    const FrameSampler s(fr, g);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      const double xi = (g.x(j) - c) / R;
      const double cx = WindowFunction::chi(xi);
      const double cx1 = WindowFunction::chi_d1(xi);
      const double cx2 = WindowFunction::chi_d2(xi);
      const double w = ct * cx;
      const double u = s.u(j);
      if (w != 0.0) {
        const DensityPoint d = s.at(j, m);
        s1 += w * (d.T11 + v * d.T01);
        s2 += w * (d.T01 + v * d.T00);
        s3 += w * d.Q;
      }
      const double w_tt = ct2 * cx / (T * T) - 2.0 * v * ct1 * cx1 / (T * R) + v * v * ct * cx2 / (R * R);
      const double w_xx = ct * cx2 / (R * R);
      s4 += u * u * (w_xx - w_tt);
    }
    ts.push_back(tm);
    f1.push_back(s1 * g.dx);
    f2.push_back(s2 * g.dx);
    f3.push_back(s3 * g.dx);
    f4.push_back(s4 * g.dx);
  }
  WindowedFunctionals out;
  if (ts.size() < 2) return out;
  out.I1 = integrate_trapezoid(ts, f1, ts.front(), ts.back());
  out.I2 = integrate_trapezoid(ts, f2, ts.front(), ts.back());
  out.I3_direct = integrate_trapezoid(ts, f3, ts.front(), ts.back());
  out.I3_weak = integrate_trapezoid(ts, f4, ts.front(), ts.back());
  return out;
}

double IdentityResidual::absolute() const { return std::fabs(lhs - rhs); }
double IdentityResidual::relative() const { return absolute() / (1.0 + std::fabs(lhs)); }

IdentityResidual case3_identity_residual(double ut, double ux, double u, double v, double p) {
  if (!(p > 1.0)) throw InvalidInput("case3_identity_residual: need p > 1");
  const DensityPoint d = densities_at(ut, ux, u, ModelParams{p, true});
  IdentityResidual r;
  r.lhs = (d.T11 + v * d.T01) + v * (d.T01 + v * d.T00) + 0.25 * (1.0 - v * v) * d.Q;
  const double w = v * ut + ux;
  r.rhs = w * w + (p - 1.0) * (1.0 - v * v) / (2.0 * (p + 1.0)) * abs_pow(u, p + 1.0);
  return r;
}

CaseBoundsReport case_bounds_check(double ut, double ux, double u, double v, double p) {
  const DensityPoint d = densities_at(ut, ux, u, ModelParams{p, true});
  const double phi = potential(u, p);
  const double flux = d.T01 + v * d.T00;
  const double scale = 1e-12 * (1.0 + std::fabs(d.T01) + std::fabs(v) * d.T00 + phi);
  CaseBoundsReport r;
  if (v >= 1.0) {
    r.spacelike_applicable = true;
    r.spacelike_margin = flux - phi;
    r.spacelike_holds = r.spacelike_margin >= -scale;
  }
  if (v > 0.0 && v < 1.0) {
    r.lightlike_applicable = true;
    r.lightlike_margin = flux + (1.0 - v) * d.T00 - v * phi;
    r.lightlike_holds = r.lightlike_margin >= -scale;
  }
  return r;
}

EnergyFluxReport energy_flux_identity(const Spacetime& st, double x0) {
  const Grid& g = st.grid();
  const ModelParams& m = st.model();
  const std::size_t nf = st.size();
  {
    const double xa = x0 + st.mid_min();
    const double xb = x0 + st.mid_max();
    require_inside(g, xa, xb, "energy_flux_identity");
  }
  std::vector<double> half(nf), flux(nf), tm(nf);
  EnergyFluxReport rep;
  rep.min_half_energy = 0.0;
  const double e0 = st.initial_energy();
  bool first = true;
  for (std::size_t k = 0; k < nf; ++k) {
    const StressEnergyFields d = densities(st.frame(k), g, m);
    const double edge = x0 + d.t;
    const double s = (edge - g.x_min) / g.dx;
    const auto j = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, static_cast<double>(g.n_points - 2)));
    const double w = s - static_cast<double>(j);
    // Trapezoid in x up to x_j, then the exact integral of the linear
    // interpolant over the partial cell.
    double h = 0.0;
    for (std::size_t i = 0; i < j; ++i) h += 0.5 * (d.T00[i] + d.T00[i + 1]);
    h *= g.dx;
    const double t_edge = (1.0 - w) * d.T00[j] + w * d.T00[j + 1];
    h += 0.5 * (d.T00[j] + t_edge) * w * g.dx;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < g.n_points; ++i) total += 0.5 * (d.T00[i] + d.T00[i + 1]);
    total *= g.dx;

    half[k] = h;
    tm[k] = d.t;
    flux[k] = interpolate(g, d.T00, edge) + interpolate(g, d.T01, edge);
    rep.min_half_energy = first ? h : std::min(rep.min_half_energy, h);
    first = false;
    if (total > 0.0) rep.max_half_fraction = std::max(rep.max_half_fraction, h / total);
    if (e0 > 0.0) rep.max_total_over_energy = std::max(rep.max_total_over_energy, total / e0);
  }
  for (std::size_t k = 1; k + 1 < nf; ++k) {
    const double lhs = ThreePoint(tm[k - 1], tm[k], tm[k + 1])(half[k - 1], half[k], half[k + 1]);
    rep.max_residual = std::max(rep.max_residual, std::fabs(lhs - flux[k]));
  }
  return rep;
}

}  // namespace nlw
