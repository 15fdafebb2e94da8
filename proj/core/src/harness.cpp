#include "nlw/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "nlw/errors.hpp"
#include "nlw/report.hpp"
#include "nlw/snapshot.hpp"

namespace nlw {

Spacetime Simulation::view() const {
  if (!forward) throw InvalidInput("Simulation: no trajectory");
  return backward ? Spacetime(*forward, *backward) : Spacetime(*forward);
}

Simulation simulate(const ExperimentConfig& config) {
  config.validate();
  Simulation sim;
  sim.grid = config.grid();
  const FieldState initial = initial_data(config.profile, sim.grid);
  if (config.symmetric) {
    SymmetricRun run = evolve_symmetric(initial, config.t_final, config.model, config.solver);
    sim.forward = std::make_unique<Trajectory>(std::move(run.forward));
    sim.backward = std::make_unique<Trajectory>(std::move(run.backward));
  } else {
    sim.forward = std::make_unique<Trajectory>(evolve(initial, config.t_final, config.model, config.solver));
  }
  return sim;
}

LinfSeries linf_series(const Spacetime& st) {
  LinfSeries s;
  for (std::size_t k : st.level_frames()) {
    const FrameRef& f = st.frame(k);
    double m = 0.0;
    for (double v : f.u0) m = std::max(m, std::fabs(v));
    s.t.push_back(f.t0);
    s.linf.push_back(m);
  }
  return s;
}

double average_linf(const LinfSeries& series, double t0, double T) {
  if (!(T > 0.0)) throw InvalidInput("average_linf: need T > 0");
  return integrate_trapezoid(series.t, series.linf, t0 - T, t0 + T) / (2.0 * T);
}

DecayCurve decay_curve(const Spacetime& st, const std::vector<double>& T_list) {
  const LinfSeries s = linf_series(st);
  const double slack = 1e-9;
  DecayCurve curve;
  for (double T : T_list) {
    if (s.t.empty() || -T < s.t.front() - slack * T || T > s.t.back() + slack * T) {
      std::ostringstream msg;
      msg << "decay_curve: [-" << T << ", " << T << "] is not inside the recorded span";
      throw InvalidInput(msg.str());
    }
    const double lo = std::max(-T, s.t.front());
    const double hi = std::min(T, s.t.back());
    DecayPoint p;
    p.T = T;
    p.A = integrate_trapezoid(s.t, s.linf, lo, hi) / (2.0 * T);
    p.A_sweep = p.A;
    for (double t0 : {-0.5 * T, 0.5 * T}) {
      if (t0 - T >= s.t.front() - slack * T && t0 + T <= s.t.back() + slack * T) {
        const double a = std::max(t0 - T, s.t.front());
        const double b = std::min(t0 + T, s.t.back());
        p.A_sweep = std::max(p.A_sweep, integrate_trapezoid(s.t, s.linf, a, b) / (2.0 * T));
      }
    }
    curve.push_back(p);
  }
  return curve;
}

double max_outside_cone(const Spacetime& st, double lo, double hi) {
  const Grid& g = st.grid();
  double worst = 0.0;
  auto scan = [&](double t, std::span<const double> u) {
    const double a = lo - std::fabs(t) - g.dx;
    const double b = hi + std::fabs(t) + g.dx;
    for (std::size_t j = 0; j < g.n_points; ++j) {
      const double x = g.x(j);
      if (x < a || x > b) worst = std::max(worst, std::fabs(u[j]));
    }
  };
  for (std::size_t k = 0; k < st.size(); ++k) {
    scan(st.frame(k).t0, st.frame(k).u0);
    scan(st.frame(k).t1, st.frame(k).u1);
  }
  return worst;
}

std::vector<RayFluxRow> ray_flux_sweep(const Spacetime& st, double lo, double hi, int rays) {
  if (rays < 1) throw InvalidInput("ray_flux_sweep: need rays >= 1");
  const double bound = (st.model().p + 1.0) * st.initial_energy();
  std::vector<RayFluxRow> rows;
  for (int i = 0; i < rays; ++i) {
    const double x0 = rays == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / (rays - 1);
    for (int dir : {1, -1}) {
      RayFluxRow r;
      r.x0 = x0;
      r.direction = dir;
      r.flux = light_ray_flux(st, x0, dir);
      r.bound = bound;
      r.ratio = bound > 0.0 ? r.flux / bound : 0.0;
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<ParallelogramRow> parallelogram_sweep(const Spacetime& st, const ParallelogramSweep& sweep) {
  std::vector<ParallelogramRow> rows;
  for (double v : sweep.v) {
    for (double R : sweep.R) {
      for (double T : sweep.T) {
        if (T < R) continue;
        const ParallelogramSpec spec{sweep.t0, sweep.x0, v, R, T};
        ParallelogramRow row{sweep.t0, sweep.x0, v, R, T, 0.0, spec.envelope(), 0.0};
        try {
          row.integral = parallelogram_integral(st, spec);
        } catch (const PaddingViolation&) {
          continue;
        }
        row.ratio = row.integral / row.envelope;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

ScalingFit scaling_fit(const std::vector<ParallelogramRow>& rows) {
  if (rows.size() < 8) throw InvalidInput("scaling_fit: need at least 8 (R, T) rows");
  ScalingFit fit;
  fit.v = rows.front().v;
  std::map<double, std::vector<std::pair<double, double>>> by_R;
  double log_ratio_sum = 0.0;
  int positive = 0;
  for (const auto& r : rows) {
    if (r.v != fit.v) throw InvalidInput("scaling_fit: rows must share one v");
    fit.max_ratio = std::max(fit.max_ratio, r.ratio);
    if (r.integral > 0.0) {
      by_R[r.R].emplace_back(std::log(r.T), std::log(r.integral));
      log_ratio_sum += std::log(r.integral) - std::log(r.envelope);
      ++positive;
    }
  }
  bool have_slope = false;
  for (const auto& [R, pts] : by_R) {
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
      mx += x / n;
      my += y / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
      sxx += (x - mx) * (x - mx);
      sxy += (x - mx) * (y - my);
    }
    if (pts.size() < 2 || sxx <= 0.0) continue;
    const double slope = sxy / sxx;
    fit.exponent_T = have_slope ? std::max(fit.exponent_T, slope) : slope;
    have_slope = true;
  }
  if (!have_slope) throw InvalidInput("scaling_fit: degenerate sweep (no R with two distinct T and nonzero integrals)");
  fit.C_fit = std::exp(log_ratio_sum / positive);
  if (fit.exponent_T > 0.9) {
    fit.warning = true;
    std::ostringstream msg;
    msg << "fitted T exponent " << fit.exponent_T << " is close to the trivial O(T) energy bound";
    fit.message = msg.str();
  }
  return fit;
}

bool RunReport::ok() const {
  return std::none_of(stages.begin(), stages.end(), [](const StageRecord& s) { return s.status == "failed"; });
}

const StageRecord* RunReport::stage(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const InvalidInput*>(&e)) return "invalid_input";
  if (dynamic_cast<const NumericalFault*>(&e)) return "numerical_fault";
  if (dynamic_cast<const ResourceLimit*>(&e)) return "resource_limit";
  return "error";
}

double profile_energy(const ProfileSpec& profile, const Grid& grid, const ModelParams& model) {
  return norms(initial_data(profile, grid), model).energy;
}

ProfileSpec with_amplitude(ProfileSpec profile, double a) {
  std::visit(
      [a](auto& p) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(p)>, ZeroProfile>) p.amplitude = a;
      },
      profile);
  return profile;
}

}  // namespace

ProfileSpec match_energy(const ProfileSpec& profile, const Grid& grid, const ModelParams& model, double target) {
  if (!(target > 0.0)) throw InvalidInput("match_energy: target energy must be > 0");
  if (std::holds_alternative<ZeroProfile>(profile)) throw InvalidInput("match_energy: zero profile has no energy");
  // Energy grows monotonically with the amplitude; bracket, then bisect.
  double lo = 0.0, hi = 1.0;
  while (profile_energy(with_amplitude(profile, hi), grid, model) < target) {
    hi *= 2.0;
    if (hi > 1e6) throw InvalidInput("match_energy: target energy out of reach");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (profile_energy(with_amplitude(profile, mid), grid, model) < target ? lo : hi) = mid;
  }
  return with_amplitude(profile, 0.5 * (lo + hi));
}

std::vector<DecayMatrixRow> decay_matrix(const ExperimentConfig& config) {
  config.validate();
  if (!config.symmetric) throw InvalidInput("decay_matrix: needs a symmetric run");
  const Grid grid = config.grid();
  const double target = profile_energy(config.profile, grid, config.model);
  const double c = profile_center(config.profile);
  const std::vector<std::pair<std::string, ProfileSpec>> family{
      {"configured", config.profile},
      {"gaussian", GaussianProfile{1.0, c, 1.0}},
      {"bump", BumpProfile{1.0, c, 3.0}},
      {"noise", FilteredNoiseProfile{config.seed, 4.0, 1.0, c, 4.0, 16}},
  };
  std::vector<DecayMatrixRow> rows;
  for (const auto& [name, base] : family) {
    ExperimentConfig run = config;
    run.profile = name == "configured" ? base : match_energy(base, grid, config.model, target);
    run.half_width = grid.x_max;
    const Simulation sim = simulate(run);
    const double amp = std::visit(
        [](const auto& p) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(p)>, ZeroProfile>) {
            return 0.0;
          } else {
            return p.amplitude;
          }
        },
        run.profile);
    for (const auto& p : decay_curve(sim.view(), config.T_list)) {
      rows.push_back({name, amp, sim.forward->energy(0), p});
    }
  }
  return rows;
}

RunReport run_experiment(const ExperimentConfig& config, const std::vector<std::string>& only) {
  config.validate();
  RunReport report;
  {
    // The hash identifies the experiment, not where its outputs go.
    ExperimentConfig hashed = config;
    hashed.output_dir.clear();
    report.config_hash = sha256_hex(to_ini(hashed));
  }
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);

  auto emit = [&](const std::string& name, const std::string& text) {
    write_text(dir / name, text);
    report.files.push_back(dir / name);
  };
  auto run_stage = [&](const std::string& name, bool deps_ok, const std::function<void()>& body) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) {
      report.stages.push_back({name, "skipped", "not requested", ""});
      return false;
    }
    if (!deps_ok) {
      report.stages.push_back({name, "skipped", "a required earlier stage failed", ""});
      return false;
    }
    try {
      body();
      report.stages.push_back({name, "ok", "", ""});
      return true;
    } catch (const std::exception& e) {
      report.stages.push_back({name, "failed", e.what(), error_kind(e)});
      return false;
    }
  };

  Simulation sim;
  const bool sim_ok = run_stage("simulate", true, [&] {
    sim = simulate(config);
    write_snapshot(dir / "forward.nlwt", *sim.forward);
    report.files.push_back(dir / "forward.nlwt");
    if (sim.backward) {
      write_snapshot(dir / "backward.nlwt", *sim.backward);
      report.files.push_back(dir / "backward.nlwt");
    }
    emit("energy.csv", energy_csv(*sim.forward));
  });

  run_stage("conservation", sim_ok, [&] { emit("conservation.csv", conservation_csv(conservation_series(sim.view()))); });

  run_stage("ray_flux", sim_ok, [&] {
    const double c = profile_center(config.profile);
    const double r = support_radius(config.profile);
    emit("ray_flux.csv", ray_flux_csv(ray_flux_sweep(sim.view(), c - r, c + r, config.rays)));
  });

  run_stage("parallelogram", sim_ok, [&] {
    const auto rows = parallelogram_sweep(sim.view(), config.sweep);
    emit("parallelogram.csv", parallelogram_csv(rows));
    std::vector<ScalingFit> fits;
    for (double v : config.sweep.v) {
      std::vector<ParallelogramRow> at_v;
      std::copy_if(rows.begin(), rows.end(), std::back_inserter(at_v), [&](const auto& r) { return r.v == v; });
      if (at_v.size() >= 8) {
        try {
          fits.push_back(scaling_fit(at_v));
        } catch (const InvalidInput&) {
          // degenerate (e.g. all-zero) columns carry no fit
        }
      }
    }
    emit("scaling.json", scaling_json(fits));
  });

  run_stage("worldline", sim_ok, [&] {
    const Spacetime st = sim.view();
    const ConcentrationTrace trace = concentration_times(st, config.threshold);
    const int m_max = static_cast<int>(std::max<std::size_t>(1, particle_number(trace, ParticleMode::chain)));
    const WorldlineExtraction x = extract_lipschitz_worldline(trace, config.eps0, m_max);
    emit("worldline.csv", worldline_csv(trace, x));
    emit("extraction.json", extraction_json(x));
  });

  run_stage("decay", sim_ok, [&] {
    const Spacetime st = sim.view();
    std::vector<double> Ts;
    const double span = std::min(-st.t_min(), st.t_max());
    for (double T : config.T_list) {
      if (T <= span * (1.0 + 1e-9)) Ts.push_back(T);
    }
    if (Ts.empty()) throw InvalidInput("decay: no T in T_list fits the recorded span (use a symmetric run)");
    emit("decay.csv", decay_csv(decay_curve(st, Ts)));
  });

  run_stage("rademacher", true, [&] {
    // A sample without a quiet scale or a resolvable annulus is recorded in
    // the corpus; the stage fails only when no sample succeeds.
    const int n = std::max(1, config.rademacher_samples);
    std::string corpus = "seed,status,n0,r,measure,accepted_fraction,band_sum\n";
    bool any = false;
    std::string last_error;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
      try {
        const RademacherReport r =
            run_rademacher(random_lipschitz_sample(seed, config.rademacher.n_max), config.rademacher);
        if (!any) emit("rademacher.json", rademacher_json(r));
        any = true;
        corpus += std::to_string(seed) + ",ok," + std::to_string(r.quiet.n0) + "," + format_number(r.quiet.r) + "," +
                  format_number(r.set.measure) + "," + format_number(r.set.accepted_fraction) + "," +
                  format_number(r.quiet.band_sum) + "\n";
      } catch (const InvalidInput& e) {
        last_error = e.what();
        corpus += std::to_string(seed) + ",failed,,,,,\n";
      }
    }
    emit("rademacher_corpus.csv", corpus);
    if (!any) throw InvalidInput("rademacher: no corpus sample succeeded (" + last_error + ")");
  });

  write_text(dir / "manifest.json", manifest_json(report, dir));
  return report;
}

}  // namespace nlw
