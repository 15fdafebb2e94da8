#include <cmath>
#include <vector>

#include "doctest.h"
#include "nlw/errors.hpp"
#include "nlw/field.hpp"
#include "nlw/integrator.hpp"
#include "nlw/random.hpp"

using namespace nlw;

namespace {

// Mean of |s|^{p-1} s over [b, a] by composite Gauss-Legendre in long double,
// split at 0 where the integrand has limited smoothness.
long double mean_phi(long double a, long double b, long double p) {
  if (a == b) return std::copysign(std::pow(std::fabs(a), p), a);
  // Away from the diagonal the antiderivative |s|^{p+1}/(p+1) is exact.
  if (std::fabs(a - b) > 1e-3L * std::max(std::fabs(a), std::fabs(b))) {
    return (std::pow(std::fabs(a), p + 1) - std::pow(std::fabs(b), p + 1)) / ((p + 1) * (a - b));
  }
  const long double lo = std::min(a, b), hi = std::max(a, b);
  static const long double xg[] = {-0.906179845938663992797626878299L, -0.538469310105683091036314420700L, 0.0L,
                                   0.538469310105683091036314420700L, 0.906179845938663992797626878299L};
  static const long double wg[] = {0.236926885056189087514264040720L, 0.478628670499366468041291514836L,
                                   0.568888888888888888888888888889L, 0.478628670499366468041291514836L,
                                   0.236926885056189087514264040720L};
  auto integrate = [&](long double l, long double h) {
    const int n = 400;
    const long double step = (h - l) / n;
    long double acc = 0.0L;
    for (int i = 0; i < n; ++i) {
      const long double c = l + (i + 0.5L) * step;
      for (int k = 0; k < 5; ++k) {
        const long double s = c + 0.5L * step * xg[k];
        acc += wg[k] * 0.5L * step * std::copysign(std::pow(std::fabs(s), p), s);
      }
    }
    return acc;
  };
  long double total = 0.0L;
  if (lo < 0.0L && hi > 0.0L) {
    total = integrate(lo, 0.0L) + integrate(0.0L, hi);
  } else {
    total = integrate(lo, hi);
  }
  return total / (hi - lo);
}

// Bisection in long double on x + dt2 G(x, b) = c.
long double bisect_root(double c, double b, double dt2, double p) {
  long double lo = -1e3L, hi = 1e3L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    const long double r = mid + dt2 * mean_phi(mid, b, p) - c;
    (r > 0 ? hi : lo) = mid;
  }
  return 0.5L * (lo + hi);
}

double gaussian(double x, double c, double w) { return std::exp(-(x - c) * (x - c) / (w * w)); }

}  // namespace

TEST_CASE("difference quotient matches the mean of the nonlinearity") {
  Rng rng(11);
  for (double p : {3.0, 5.0, 2.0, 2.5, 1.5, 4.2}) {
    for (int i = 0; i < 40; ++i) {
      const double a = rng.uniform(-2.0, 2.0);
      const double b = (i % 4 == 0) ? a * (1.0 + rng.uniform(-1e-5, 1e-5)) : rng.uniform(-2.0, 2.0);
      const double got = nonlinear_difference_quotient(a, b, p);
      const double want = static_cast<double>(mean_phi(a, b, p));
      INFO("p=" << p << " a=" << a << " b=" << b);
      REQUIRE(std::fabs(got - want) <= 1e-12 * (1.0 + std::fabs(want)));
    }
  }
}

TEST_CASE("difference quotient on the diagonal and at zero") {
  for (double p : {3.0, 2.5}) {
    CHECK(nonlinear_difference_quotient(0.7, 0.7, p) == doctest::Approx(std::pow(0.7, p)).epsilon(1e-14));
    CHECK(nonlinear_difference_quotient(-0.7, -0.7, p) == doctest::Approx(-std::pow(0.7, p)).epsilon(1e-14));
    CHECK(nonlinear_difference_quotient(0.0, 0.0, p) == 0.0);
  }
  // Antisymmetry G(-a, -b) = -G(a, b).
  CHECK(nonlinear_difference_quotient(-0.3, 1.1, 2.5) == doctest::Approx(-nonlinear_difference_quotient(0.3, -1.1, 2.5)));
}

TEST_CASE("difference quotient derivative") {
  Rng rng(12);
  for (double p : {3.0, 5.0, 2.5}) {
    for (int i = 0; i < 30; ++i) {
      const double a = rng.uniform(-1.5, 1.5);
      const double b = rng.uniform(-1.5, 1.5);
      const double h = 1e-5;
      const double fd = static_cast<double>(
          (mean_phi(a + h, b, p) - mean_phi(a - h, b, p)) / (2.0L * h));
      REQUIRE(nonlinear_difference_quotient_da(a, b, p) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("implicit point solve agrees with bisection") {
  Rng rng(13);
  for (double p : {3.0, 5.0, 2.5}) {
    for (int i = 0; i < 25; ++i) {
      const double c = rng.uniform(-3.0, 3.0);
      const double b = rng.uniform(-3.0, 3.0);
      const double dt2 = rng.uniform(1e-6, 1e-1);
      const double x = solve_implicit_point(c, b, dt2, p, 1e-14, 80);
      const double want = static_cast<double>(bisect_root(c, b, dt2, p));
      INFO("p=" << p << " c=" << c << " b=" << b << " dt2=" << dt2);
      REQUIRE(std::fabs(x - want) <= 1e-12 * (1.0 + std::fabs(want)));
    }
  }
}

TEST_CASE("implicit point solve reports non-convergence") {
  CHECK_THROWS_AS(solve_implicit_point(2.0, 1.0, 0.5, 3.0, 1e-300, 1), NumericalFault);
}

TEST_CASE("linear mode is the explicit leapfrog") {
  const Grid g = make_grid(-5.0, 5.0, 0.05);
  const SolverParams solver{0.5, 1e-13, 60, 1};
  Rng rng(3);
  std::vector<double> prev(g.n_points, 0.0), curr(g.n_points, 0.0);
  for (std::size_t j = 1; j + 1 < g.n_points; ++j) {
    prev[j] = rng.uniform(-1.0, 1.0);
    curr[j] = rng.uniform(-1.0, 1.0);
  }
  const auto next = step(prev, curr, g, ModelParams{3.0, false}, solver);
  const double dt = 0.5 * 0.05;
  const double lam2 = (dt * dt) / (0.05 * 0.05);
  CHECK(next.front() == 0.0);
  CHECK(next.back() == 0.0);
  for (std::size_t j = 1; j + 1 < g.n_points; ++j) {
    const double want = 2.0 * curr[j] - prev[j] + lam2 * (curr[j + 1] - 2.0 * curr[j] + curr[j - 1]);
    REQUIRE(next[j] == want);
  }
}

TEST_CASE("nonlinear step satisfies the scheme equation") {
  const Grid g = make_grid(-5.0, 5.0, 0.05);
  const SolverParams solver{0.5, 1e-14, 60, 1};
  const double dt = solver.dt(g);
  for (double p : {3.0, 2.5}) {
    std::vector<double> prev(g.n_points, 0.0), curr(g.n_points, 0.0);
    for (std::size_t j = 1; j + 1 < g.n_points; ++j) {
      prev[j] = 2.0 * gaussian(g.x(j), 0.0, 1.0);
      curr[j] = 2.0 * gaussian(g.x(j), 0.01, 1.0);
    }
    const auto next = step(prev, curr, g, ModelParams{p, true}, solver);
    for (std::size_t j = 1; j + 1 < g.n_points; ++j) {
      const double lhs = (next[j] - 2.0 * curr[j] + prev[j]) / (dt * dt);
      const double lap = (curr[j + 1] - 2.0 * curr[j] + curr[j - 1]) / (g.dx * g.dx);
      const double rhs = lap - static_cast<double>(mean_phi(next[j], prev[j], p));
      REQUIRE(std::fabs(lhs - rhs) <= 1e-8);
    }
  }
}

TEST_CASE("discrete energy is conserved") {
  const Grid g = make_symmetric_grid(20.0, 0.02);
  for (double p : {3.0, 2.5, 5.0}) {
    const FieldState init = initial_data(GaussianProfile{1.5, 0.0, 1.0}, g);
    const Trajectory traj = evolve(init, 8.0, ModelParams{p, true}, SolverParams{0.5, 1e-14, 60, 20});
    const double e0 = traj.energy(0);
    double drift = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) drift = std::max(drift, std::fabs(traj.energy(k) - e0) / e0);
    INFO("p=" << p);
    CHECK(drift <= 1e-11);
  }
}

TEST_CASE("linear evolution transports a traveling profile at second order") {
  std::vector<double> errors;
  for (double dx : {0.04, 0.02, 0.01}) {
    const Grid g = make_symmetric_grid(20.0, dx);
    const FieldState init = initial_data(TravelingProfile{1.0, -3.0, 1.0, 1}, g);
    const SolverParams solver{0.5, 1e-13, 60, 1};
    const Trajectory traj = evolve(init, 6.0, ModelParams{3.0, false}, solver);
    const std::size_t k = traj.size() - 1;
    const double t = traj.time(k);
    const auto u = traj.level0(k);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) err = std::max(err, std::fabs(u[j] - gaussian(g.x(j), -3.0 + t, 1.0)));
    errors.push_back(err);
  }
  CHECK(errors.back() < 1e-3);
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double rate = errors[i - 1] / errors[i];
    INFO("rate " << rate);
    CHECK(rate > 3.0);
    CHECK(rate < 5.0);
  }
}

TEST_CASE("time reversal recovers the initial level pair") {
  const Grid g = make_symmetric_grid(16.0, 0.02);
  const ModelParams model{3.0, true};
  const SolverParams solver{0.5, 1e-15, 80, 1};
  const FieldState init = initial_data(GaussianProfile{2.0, 0.0, 1.0}, g);
  auto [u0, u1] = taylor_start(init, model, solver.dt(g));
  const std::size_t n = 800;
  const Trajectory fwd = evolve_levels(g, 0.0, u0, u1, n + 1, model, solver);
  const auto a = fwd.level0(n), b = fwd.level1(n);
  const Trajectory back = evolve_levels(g, 0.0, std::vector<double>(b.begin(), b.end()),
                                        std::vector<double>(a.begin(), a.end()), n + 1, model, solver);
  double err = 0.0;
  for (std::size_t j = 0; j < g.n_points; ++j) {
    err = std::max(err, std::fabs(back.level1(n)[j] - u0[j]));
    err = std::max(err, std::fabs(back.level0(n)[j] - u1[j]));
  }
  CHECK(err <= 1e-8);
}

TEST_CASE("stored frames follow the stride") {
  const Grid g = make_symmetric_grid(10.0, 0.05);
  const FieldState init = initial_data(GaussianProfile{1.0, 0.0, 1.0}, g);
  const ModelParams model{3.0, true};
  const Trajectory t1 = evolve(init, 2.0, model, SolverParams{0.5, 1e-13, 60, 1});
  const Trajectory t4 = evolve(init, 2.0, model, SolverParams{0.5, 1e-13, 60, 4});
  REQUIRE(t4.size() >= 2);
  CHECK(t4.time(t4.size() - 1) >= 2.0 - 1e-12);
  for (std::size_t k = 0; k < t4.size(); ++k) {
    REQUIRE(4 * k < t1.size());
    const auto a = t4.level0(k), b = t1.level0(4 * k);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
    CHECK(t4.time(k) == doctest::Approx(t1.time(4 * k)).epsilon(1e-14));
  }
}

TEST_CASE("evolve enforces the padding contract") {
  const Grid g = make_symmetric_grid(6.0, 0.05);
  const FieldState init = initial_data(BumpProfile{1.0, 0.0, 1.0}, g);
  CHECK_THROWS_AS(evolve(init, 8.0, ModelParams{}, SolverParams{}), PaddingViolation);
  CHECK_NOTHROW(evolve(init, 3.0, ModelParams{}, SolverParams{}));
  CHECK_THROWS_AS(evolve(init, 1.0, ModelParams{}, SolverParams{1.2, 1e-13, 60, 1}), InvalidInput);
}

TEST_CASE("symmetric run of time-even data") {
  // u_t = 0 data is even in time, so the backward run equals the forward run.
  const Grid g = make_symmetric_grid(12.0, 0.05);
  const FieldState init = initial_data(GaussianProfile{1.0, 0.0, 1.0}, g);
  const SymmetricRun run = evolve_symmetric(init, 3.0, ModelParams{}, SolverParams{0.5, 1e-13, 60, 5});
  REQUIRE(run.forward.size() == run.backward.size());
  for (std::size_t k = 0; k < run.forward.size(); ++k) {
    const auto a = run.forward.level1(k), b = run.backward.level1(k);
    REQUIRE(std::equal(a.begin(), a.end(), b.begin()));
  }
}
