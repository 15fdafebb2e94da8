// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nlw/config.hpp"
#include "nlw/harness.hpp"
#include "nlw/rademacher.hpp"
#include "nlw/random.hpp"
#include "nlw/stress_energy.hpp"
#include "nlw/worldline.hpp"

using namespace nlw;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0.0 && secs > budget_s) {
    o.pass = false;
    o.detail += " [over time budget " + std::to_string(budget_s) + " s]";
  }
  if (!o.pass) ++failures;
  std::printf("%s  AC%-2d %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// The reference run is shared by AC3-AC5.
const ExperimentConfig& reference_config() {
  static const ExperimentConfig c = load_config(NLW_REFERENCE_CONFIG);
  return c;
}

const Simulation& reference_run() {
  static const Simulation sim = simulate(reference_config());
  return sim;
}

Outcome energy_conservation() {
  const Grid g = make_symmetric_grid(64.0, 0.01);
  const ModelParams model{3.0, true};
  const SolverParams solver{0.5, 1e-13, 60, 1};
  const Stepper stepper(g, model, solver);
  auto [prev, curr] = taylor_start(initial_data(GaussianProfile{1.0, 0.0, 1.0}, g), model, stepper.dt());
  std::vector<double> next(g.n_points, 0.0);
  const double e0 = discrete_energy(prev, curr, g, model, stepper.dt());
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) {
    stepper.step(prev, curr, next);
    std::swap(prev, curr);
    std::swap(curr, next);
    worst = std::max(worst, std::fabs(discrete_energy(prev, curr, g, model, stepper.dt()) - e0) / e0);
  }
  return {worst <= 1e-10, fmt("max relative drift %.3e (<= 1e-10)", worst)};
}

Outcome case3_identity() {
  Rng rng(2024);
  const double ps[] = {1.5, 2.0, 3.0, 5.0};
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double p = ps[i % 4];
    const IdentityResidual r = case3_identity_residual(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-3, 3),
                                                       rng.uniform(-2, 2), p);
    worst = std::max(worst, r.relative());
  }
  return {worst <= 1e-11, fmt("max relative residual %.3e (<= 1e-11)", worst)};
}

Outcome light_rays() {
  const Spacetime st = reference_run().view();
  const ExperimentConfig& c = reference_config();
  const double center = profile_center(c.profile), radius = support_radius(c.profile);
  const auto rows = ray_flux_sweep(st, center - radius, center + radius, 25);
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.ratio);
  return {rows.size() == 50 && worst <= 1.05, fmt("%g rays, max flux / ((p+1) E_h(0)) = %.4f (<= 1.05)",
                                                  static_cast<double>(rows.size()), worst)};
}

Outcome pointwise_inequalities() {
  const Spacetime st = reference_run().view();
  const ModelParams& m = st.model();
  double worst_sum = 0.0, worst_abs = 0.0;
  std::size_t bad = 0;
  for (std::size_t k = 0; k < st.size(); ++k) {
    const StressEnergyFields d = densities(st.frame(k), st.grid(), m);
    for (std::size_t j = 0; j < d.T00.size(); ++j) {
      const double a = d.T00[j] + d.T01[j] - potential(d.u[j], m.p);
      const double b = d.T00[j] - std::fabs(d.T01[j]);
      worst_sum = std::min(worst_sum, a);
      worst_abs = std::min(worst_abs, b);
      if (a < -1e-12 || b < -1e-12) ++bad;
    }
  }
  return {bad == 0, fmt("min(T00+T01-|u|^{p+1}/(p+1)) = %.3e, min(T00-|T01|) = %.3e", worst_sum, worst_abs) +
                        ", frames " + std::to_string(st.size())};
}

Outcome parallelogram_envelope() {
  const ExperimentConfig& c = reference_config();
  if (!(c.calibration_C > 0.0)) return {false, "reference config has no calibration_C"};
  const auto rows = parallelogram_sweep(reference_run().view(), c.sweep);
  const std::size_t expected = c.sweep.v.size() * c.sweep.R.size() * c.sweep.T.size();
  double worst = 0.0, col_half = 0.0, col_one = 0.0;
  for (const auto& r : rows) {
    worst = std::max(worst, r.ratio);
    if (r.v == 0.5) col_half = std::max(col_half, r.ratio);
    if (r.v == 1.0) col_one = std::max(col_one, r.ratio);
  }
  const double rel = col_half > 0.0 ? col_one / col_half : INFINITY;
  const bool ok = rows.size() == expected && worst <= c.calibration_C && rel <= 3.0 && rel >= 1.0 / 3.0;
  return {ok, std::to_string(rows.size()) + "/" + std::to_string(expected) + " slabs, " +
                  fmt("max ratio %.4f (C = %.4f), ", worst, c.calibration_C) +
                  fmt("v=1 / v=0.5 column max = %.3f", rel)};
}

Outcome decay_contrast() {
  const double dx = 0.02, T = 64.0;
  ExperimentConfig nl;
  nl.profile = BumpProfile{4.0, 0.0, 1.0};
  nl.dx = dx;
  nl.t_final = T;
  nl.sweep.T = {T};
  const Grid g = nl.grid();
  const double energy = norms(initial_data(nl.profile, g), nl.model).energy;

  ExperimentConfig lin = nl;
  lin.model.defocusing_on = false;
  lin.profile = match_energy(nl.profile, g, lin.model, energy);

  auto ratio = [&](const ExperimentConfig& c) {
    const Simulation sim = simulate(c);
    const DecayCurve curve = decay_curve(sim.view(), {8.0, T});
    return curve[1].A / curve[0].A;
  };
  const double rn = ratio(nl), rl = ratio(lin);
  return {rn <= 0.7 && rl >= 0.9, fmt("nonlinear A(64)/A(8) = %.3f (<= 0.7), ", rn) +
                                      fmt("linear A(64)/A(8) = %.3f (>= 0.9)", rl)};
}

Outcome finite_speed() {
  const Grid g = make_symmetric_grid(24.0, 0.02);
  const SymmetricRun run = evolve_symmetric(initial_data(BumpProfile{2.0, 0.0, 1.0}, g), 16.0,
                                            ModelParams{3.0, true}, SolverParams{0.5, 1e-13, 60, 1});
  const Spacetime st(run);
  const double worst = max_outside_cone(st, -1.0, 1.0);
  // Not part of the criterion: the same maximum beyond a widened cone.
  const double wide1 = max_outside_cone(st, -2.0, 2.0), wide2 = max_outside_cone(st, -3.0, 3.0);
  return {worst <= 1e-12, fmt("max |u| outside the cone %.3e (<= 1e-12); ", worst) +
                              fmt("beyond margin 1: %.1e, margin 2: %.1e", wide1, wide2)};
}

Outcome combinatorics() {
  Rng rng(77);
  int mismatches = 0, certificates = 0, bad_certificates = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 12.0);
    std::vector<TraceEntry> e;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      t += 1.0 + rng.uniform(0.0, 1.0);
      e.push_back({t, rng.uniform(-10.0, 10.0), 1.0});
    }
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = i + 1; j < n && ok; ++j)
          if ((mask >> i & 1u) && (mask >> j & 1u) && !(std::fabs(e[i].x - e[j].x) >= std::fabs(e[i].t - e[j].t) + 1.0))
            ok = false;
      if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
    }
    if (particle_number(e, ParticleMode::exact) != best) ++mismatches;

    // One dichotomy step on the trace with the largest admissible density.
    const double T_n = 0.5 * (e.back().t - e.front().t + 1.0);
    const double c = std::min(1.0, static_cast<double>(n) / (2.0 * T_n));
    const DichotomyResult r = dichotomy_step(e, e.front().t - 0.5, T_n, c, 0.5, 2);
    if (r.outcome == DichotomyOutcome::reduced) {
      ++certificates;
      for (const auto& s : r.subset) {
        if (!(std::fabs(s.x - r.witness->x) >= std::fabs(s.t - r.witness->t) + 1.0)) {
          ++bad_certificates;
          break;
        }
      }
    }
  }
  return {mismatches == 0 && bad_certificates == 0,
          std::to_string(mismatches) + " particle-number mismatches, " + std::to_string(certificates) +
              " reduction certificates, " + std::to_string(bad_certificates) + " invalid"};
}

Outcome rademacher_suite() {
  double worst_bessel = -INFINITY, worst_orth = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const LipschitzSample s = random_lipschitz_sample(seed, 14);
    const MultiscaleDecomposition d = decompose(s);
    worst_bessel = std::max(worst_bessel, d.total_energy() - 2.0 * s.lip_bound() * s.lip_bound());
    for (int n = 0; n < d.n_max; ++n)
      for (int m = n + 1; m < d.n_max; ++m) worst_orth = std::max(worst_orth, std::fabs(band_inner_product(d, n, m)));
  }
  const bool a = worst_bessel <= 1e-10 && worst_orth <= 1e-12;

  const MultiscaleDecomposition abs = decompose(sample_function([](double x) { return std::fabs(x); }, 14));
  bool b = abs.band_energies[0] == 2.0;
  for (std::size_t n = 1; n < abs.band_energies.size(); ++n) b = b && abs.band_energies[n] == 0.0;

  const RademacherParams params;
  int good = 0;
  const int corpus = 50;
  for (std::uint64_t seed = 1; seed <= corpus; ++seed) {
    try {
      const RademacherReport r = run_rademacher(random_lipschitz_sample(seed, params.n_max), params);
      if (r.set.measure >= 2.0 - params.delta) ++good;
    } catch (const std::exception&) {
    }
  }
  const double frac = static_cast<double>(good) / corpus;
  const bool c = frac >= 0.95;
  return {a && b && c, fmt("(a) Bessel excess %.2e, max |<band n, band m>| %.2e; ", worst_bessel, worst_orth) +
                           fmt("(b) |x| e_0 = %.17g; ", abs.band_energies[0]) +
                           fmt("(c) measure >= 1.9 on %.0f%% of the corpus", 100.0 * frac)};
}

Outcome convergence() {
  // Residuals at t = 2 and both I3 evaluations on one window.
  std::vector<double> r_energy, r_momentum, i3d, i3w;
  const ParallelogramSpec window{0.0, 0.0, 0.5, 1.0, 1.5};
  for (double dx : {0.04, 0.02, 0.01}) {
    const Grid g = make_symmetric_grid(12.0, dx);
    const SymmetricRun run = evolve_symmetric(initial_data(GaussianProfile{1.0, 0.0, 1.0}, g), 3.5,
                                              ModelParams{3.0, true}, SolverParams{0.5, 1e-14, 60, 1});
    const Spacetime st(run);
    std::size_t k = 0;
    double best = INFINITY;
    for (std::size_t i = 0; i < st.size(); ++i) {
      if (std::fabs(st.frame(i).t0 - 2.0) < best) best = std::fabs(st.frame(i).t0 - 2.0), k = i;
    }
    const ConservationResiduals r = conservation_residuals(st, k);
    r_energy.push_back(r.r_energy);
    r_momentum.push_back(r.r_momentum);
    const WindowedFunctionals w = windowed_flux_functionals(st, window);
    i3d.push_back(w.I3_direct);
    i3w.push_back(w.I3_weak);
  }
  auto in_band = [](double f) { return f >= 4.0 * 0.7 && f <= 4.0 * 1.3; };
  const double fe1 = r_energy[0] / r_energy[1], fe2 = r_energy[1] / r_energy[2];
  const double fm1 = r_momentum[0] / r_momentum[1], fm2 = r_momentum[1] / r_momentum[2];
  const double fd = (i3d[0] - i3d[1]) / (i3d[1] - i3d[2]);
  const double fw = (i3w[0] - i3w[1]) / (i3w[1] - i3w[2]);
  const bool ok = in_band(fe1) && in_band(fe2) && in_band(fm1) && in_band(fm2) && in_band(fd) && in_band(fw);
  return {ok, fmt("r_energy factors %.2f %.2f, ", fe1, fe2) + fmt("r_momentum %.2f %.2f, ", fm1, fm2) +
                  fmt("I3 direct %.2f, weak %.2f", fd, fw)};
}

}  // namespace

int main() {
  criterion(1, "energy conservation", 10.0, energy_conservation);
  criterion(2, "case-3 identity", 1.0, case3_identity);
  // The shared reference run is built inside the first criterion that needs it.
  criterion(3, "light-ray flux", 30.0, light_rays);
  criterion(4, "pointwise inequalities", 0.0, pointwise_inequalities);
  criterion(5, "parallelogram envelope", 120.0, parallelogram_envelope);
  criterion(6, "decay contrast", 300.0, decay_contrast);
  criterion(7, "finite speed", 0.0, finite_speed);
  criterion(8, "combinatorics oracle", 10.0, combinatorics);
  criterion(9, "rademacher suite", 30.0, rademacher_suite);
  criterion(10, "convergence orders", 0.0, convergence);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
