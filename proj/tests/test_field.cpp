#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nlw/errors.hpp"
#include "nlw/field.hpp"

using namespace nlw;

namespace {

// Continuum energy of A exp(-x^2/w^2) with p = 3, from the Gaussian moments
//   int x^2 e^{-a x^2} = sqrt(pi) / (2 a^{3/2}),  int e^{-a x^2} = sqrt(pi / a).
double gaussian_energy_p3(double A, double w) {
  const double pi = std::numbers::pi;
  const double a = 2.0 / (w * w);
  const double grad = 0.5 * A * A * 4.0 / std::pow(w, 4) * std::sqrt(pi) / (2.0 * std::pow(a, 1.5));
  const double pot = 0.25 * std::pow(A, 4) * std::sqrt(pi / (4.0 / (w * w)));
  return grad + pot;
}

}  // namespace

TEST_CASE("make_grid arithmetic") {
  const Grid g = make_grid(-1.0, 1.0, 0.5);
  CHECK(g.n_points == 5);
  const double expected[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  for (std::size_t j = 0; j < 5; ++j) CHECK(g.x(j) == expected[j]);
  CHECK(make_grid(0.0, 10.0, 0.01).n_points == 1001);
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(1.0, -1.0, 0.5), InvalidInput);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(make_grid(0.0, NAN, 0.1), InvalidInput);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.3), InvalidInput);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.6), InvalidInput);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 1e-9), ResourceLimit);
}

TEST_CASE("grid index round trip") {
  const Grid g = make_symmetric_grid(7.3, 0.01);
  CHECK(std::fabs(g.x(g.n_points - 1) - g.x_max) <= 1e-12 * g.length());
  for (std::size_t j = 0; j < g.n_points; ++j) REQUIRE(g.index_of(g.x(j)) == j);
}

TEST_CASE("ModelParams requires p > 1") {
  CHECK_THROWS_AS((ModelParams{1.0, true}.validate()), InvalidInput);
  CHECK_NOTHROW((ModelParams{1.0001, true}.validate()));
}

TEST_CASE("zero profile") {
  const Grid g = make_grid(-5.0, 5.0, 0.1);
  const FieldState s = initial_data(ZeroProfile{}, g);
  const Norms n = norms(s, ModelParams{});
  CHECK(n.energy == 0.0);
  CHECK(n.h1 == 0.0);
  CHECK(n.l2 == 0.0);
  CHECK(n.linf == 0.0);
  CHECK(n.lp1 == 0.0);
}

TEST_CASE("gaussian energy converges to the closed form") {
  const double exact = gaussian_energy_p3(1.0, 1.0);
  const ModelParams m{3.0, true};
  const double e1 = norms(initial_data(GaussianProfile{1.0, 0.0, 1.0}, make_grid(-20.0, 20.0, 0.01)), m).energy;
  const double e2 = norms(initial_data(GaussianProfile{1.0, 0.0, 1.0}, make_grid(-20.0, 20.0, 0.001)), m).energy;
  CHECK(std::fabs(e1 - exact) / exact < 1e-2);
  CHECK(std::fabs(e2 - exact) / exact < 1e-4);
}

TEST_CASE("traveling profile velocity is the transport derivative") {
  const Grid g = make_grid(-10.0, 10.0, 0.01);
  for (int dir : {1, -1}) {
    const FieldState s = initial_data(TravelingProfile{1.0, 0.0, 1.0, dir}, g);
    const auto u = s.u();
    const auto ut = s.ut();
    for (std::size_t j = 1; j + 1 < g.n_points; ++j) {
      REQUIRE(std::fabs(ut[j] + dir * (u[j + 1] - u[j - 1]) / (2.0 * g.dx)) <= 1e-12);
    }
  }
}

TEST_CASE("constant patch energy") {
  const Grid g = make_grid(-1.0, 1.0, 0.1);
  std::vector<double> u(g.n_points, 0.0), ut(g.n_points, 0.0);
  // k = 5 cells with u = 1 whose central differences vanish, flanked by
  // cells that carry the gradient.
  for (std::size_t j = 6; j <= 14; ++j) u[j] = 1.0;
  const FieldState s(g, 0.0, u, ut);
  const ModelParams m{3.0, true};
  const Norms n = norms(s, m);
  // Potential part: 9 points of |1|^4/4; gradient part: the two edge points
  // on each side have ux = +-1/(2 dx).
  const double expected = 9 * g.dx * 0.25 + 4 * g.dx * 0.5 * std::pow(1.0 / (2.0 * g.dx), 2);
  CHECK(n.energy == doctest::Approx(expected).epsilon(1e-13));
  const Norms lin = norms(s, ModelParams{3.0, false});
  CHECK(lin.energy == doctest::Approx(expected - 9 * g.dx * 0.25).epsilon(1e-13));
}

TEST_CASE("energy homogeneity under u -> 2u") {
  const Grid g = make_grid(-10.0, 10.0, 0.05);
  const ModelParams m{3.0, true};
  const FieldState s1 = initial_data(GaussianProfile{1.0, 0.5, 1.3}, g);
  const FieldState s2 = initial_data(GaussianProfile{2.0, 0.5, 1.3}, g);
  const double grad1 = norms(s1, ModelParams{3.0, false}).energy;
  const double grad2 = norms(s2, ModelParams{3.0, false}).energy;
  const double pot1 = norms(s1, m).energy - grad1;
  const double pot2 = norms(s2, m).energy - grad2;
  CHECK(std::fabs(grad2 - 4.0 * grad1) <= 1e-12 * grad2);
  CHECK(std::fabs(pot2 - 16.0 * pot1) <= 1e-12 * pot2);
}

TEST_CASE("initial data respects the padding contract") {
  const Grid g = make_grid(-10.0, 10.0, 0.05);
  const ProfileSpec profiles[] = {GaussianProfile{1.0, 0.0, 1.0}, TravelingProfile{0.5, 1.0, 0.7, -1},
                                  BumpProfile{2.0, -3.0, 1.0}, FilteredNoiseProfile{7, 4.0, 0.3, 0.0, 4.0, 16}};
  for (const auto& p : profiles) {
    const FieldState s = initial_data(p, g);
    const auto [lo, hi] = s.support();
    CHECK(lo >= 2);
    CHECK(hi + 3 <= g.n_points);
    const Norms n = norms(s, ModelParams{});
    CHECK(std::isfinite(n.energy));
    CHECK(n.energy > 0.0);
  }
  CHECK_THROWS_AS(initial_data(GaussianProfile{1.0, 5.0, 1.0}, g), PaddingViolation);
  CHECK_THROWS_AS(initial_data(BumpProfile{1.0, 9.0, 1.0}, g), PaddingViolation);
  CHECK_THROWS_AS(initial_data(GaussianProfile{1.0, 0.0, -1.0}, g), InvalidInput);
}

TEST_CASE("filtered noise is seeded and normalised") {
  const Grid g = make_grid(-10.0, 10.0, 0.05);
  const FieldState a = initial_data(FilteredNoiseProfile{3, 4.0, 0.5, 0.0, 4.0, 16}, g);
  const FieldState b = initial_data(FilteredNoiseProfile{3, 4.0, 0.5, 0.0, 4.0, 16}, g);
  const FieldState c = initial_data(FilteredNoiseProfile{4, 4.0, 0.5, 0.0, 4.0, 16}, g);
  CHECK(std::equal(a.u().begin(), a.u().end(), b.u().begin()));
  CHECK_FALSE(std::equal(a.u().begin(), a.u().end(), c.u().begin()));
  CHECK(norms(a, ModelParams{}).linf == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("FieldState rejects non-finite values and nonzero boundaries") {
  const Grid g = make_grid(-1.0, 1.0, 0.25);
  std::vector<double> u(g.n_points, 0.0), ut(g.n_points, 0.0);
  u[3] = NAN;
  CHECK_THROWS_AS(FieldState(g, 0.0, u, ut), NumericalFault);
  u[3] = 0.0;
  u[0] = 1.0;
  CHECK_THROWS_AS(FieldState(g, 0.0, u, ut), InvalidInput);
  CHECK_THROWS_AS(FieldState(g, 0.0, std::vector<double>(3), ut), InvalidInput);
}
