#include <benchmark/benchmark.h>

#include "nlw/integrator.hpp"
#include "nlw/rademacher.hpp"
#include "nlw/random.hpp"
#include "nlw/stress_energy.hpp"
#include "nlw/worldline.hpp"

using namespace nlw;

namespace {

void BM_Step(benchmark::State& state) {
  const Grid g = make_symmetric_grid(static_cast<double>(state.range(0)), 0.01);
  const ModelParams model{3.0, state.range(1) != 0};
  const SolverParams solver{0.5, 1e-13, 60, 1};
  const FieldState init = initial_data(GaussianProfile{2.0, 0.0, 1.0}, g);
  const Stepper stepper(g, model, solver);
  std::vector<double> a(init.u().begin(), init.u().end());
  std::vector<double> b = step(a, a, g, model, solver), c(g.n_points);
  for (auto _ : state) {
    stepper.step(a, b, c);
    std::swap(a, b);
    std::swap(b, c);
    benchmark::DoNotOptimize(b.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.n_points));
}
BENCHMARK(BM_Step)->ArgsProduct({{16, 64}, {0, 1}});

void BM_Densities(benchmark::State& state) {
  const Grid g = make_symmetric_grid(32.0, 0.01);
  const ModelParams model{3.0, true};
  const Trajectory t = evolve(initial_data(GaussianProfile{2.0, 0.0, 1.0}, g), 0.05, model,
                              SolverParams{0.5, 1e-13, 60, 1});
  const Spacetime st(t);
  for (auto _ : state) benchmark::DoNotOptimize(densities(st.frame(0), g, model));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.n_points));
}
BENCHMARK(BM_Densities);

void BM_Decompose(benchmark::State& state) {
  const LipschitzSample s = random_lipschitz_sample(7, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(s));
}
BENCHMARK(BM_Decompose)->Arg(14)->Arg(20);

void BM_ParticleNumber(benchmark::State& state) {
  Rng rng(3);
  std::vector<TraceEntry> e;
  double t = 0.0;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    t += 1.0 + rng.uniform(0.0, 0.5);
    e.push_back({t, rng.uniform(-50.0, 50.0), 1.0});
  }
  const auto mode = state.range(1) ? ParticleMode::chain : ParticleMode::greedy;
  for (auto _ : state) benchmark::DoNotOptimize(particle_number(e, mode));
}
BENCHMARK(BM_ParticleNumber)->ArgsProduct({{100, 1000}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
