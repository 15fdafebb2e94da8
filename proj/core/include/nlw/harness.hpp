#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "nlw/config.hpp"
#include "nlw/spacetime.hpp"
#include "nlw/stress_energy.hpp"

namespace nlw {

/// Owns the trajectories of one configured run; view() spans [-t_final,
/// t_final] for symmetric runs and [0, t_final] otherwise.
struct Simulation {
  Grid grid;
  std::unique_ptr<Trajectory> forward;
  std::unique_ptr<Trajectory> backward;

  Spacetime view() const;
};

Simulation simulate(const ExperimentConfig& config);

/// max |u(t)| at every stored level.
struct LinfSeries {
  std::vector<double> t;
  std::vector<double> linf;
};

LinfSeries linf_series(const Spacetime& st);

/// (1 / 2T) * integral of max|u| over [t0 - T, t0 + T].
double average_linf(const LinfSeries& series, double t0, double T);

/// A is the t0 = 0 average; A_sweep is the max over t0 in {0, -T/2, T/2}
/// restricted to windows inside the recorded span.
struct DecayPoint {
  double T = 0.0;
  double A = 0.0;
  double A_sweep = 0.0;
};

using DecayCurve = std::vector<DecayPoint>;

/// Throws InvalidInput when [-T, T] is not recorded for some T.
DecayCurve decay_curve(const Spacetime& st, const std::vector<double>& T_list);

/// max |u| over stored levels at points strictly outside
/// [lo - |t| - dx, hi + |t| + dx].
double max_outside_cone(const Spacetime& st, double lo, double hi);

struct RayFluxRow {
  double x0 = 0.0;
  int direction = 1;
  double flux = 0.0;
  double bound = 0.0;  // (p + 1) E_h(0)
  double ratio = 0.0;
};

/// `rays` starting points evenly covering [lo, hi], both directions.
std::vector<RayFluxRow> ray_flux_sweep(const Spacetime& st, double lo, double hi, int rays);

struct ParallelogramRow {
  double t0 = 0.0;
  double x0 = 0.0;
  double v = 0.0;
  double R = 0.0;
  double T = 0.0;
  double integral = 0.0;
  double envelope = 0.0;
  double ratio = 0.0;
};

/// Every (v, R, T) with T >= R whose slab lies in the recorded region.
std::vector<ParallelogramRow> parallelogram_sweep(const Spacetime& st, const ParallelogramSweep& sweep);

/// Least-squares fits on a fixed-v table: the log-log slope in T at each R
/// (exponent_T is the largest), and log C = mean(log integral - log envelope).
struct ScalingFit {
  double v = 0.0;
  double exponent_T = 0.0;
  double C_fit = 0.0;
  double max_ratio = 0.0;
  bool warning = false;
  std::string message;
};

/// Requires at least 8 rows, one v, and at least two distinct T at some R.
ScalingFit scaling_fit(const std::vector<ParallelogramRow>& rows);

struct StageRecord {
  std::string name;
  std::string status;  // ok | failed | skipped
  std::string message;
  /// For failed stages: invalid_input | numerical_fault | resource_limit | error
  std::string error_kind;
};

struct RunReport {
  std::string config_hash;
  std::vector<StageRecord> stages;
  std::vector<std::filesystem::path> files;

  bool ok() const;
  const StageRecord* stage(const std::string& name) const;
};

/// simulate -> conservation -> ray flux -> parallelogram -> worldline ->
/// decay, plus the independent rademacher stage. A failing stage is recorded
/// and its dependents are skipped. Writes artifacts and manifest.json to
/// config.output_dir. A non-empty `only` restricts the run to the named
/// stages; the others are recorded as skipped.
RunReport run_experiment(const ExperimentConfig& config, const std::vector<std::string>& only = {});

/// One decay curve per profile family (gaussian, bump, noise, and the
/// configured profile), each rescaled to the configured profile's energy.
struct DecayMatrixRow {
  std::string profile;
  double amplitude = 0.0;
  double energy = 0.0;
  DecayPoint point;
};

std::vector<DecayMatrixRow> decay_matrix(const ExperimentConfig& config);

/// Amplitude at which `profile` has discrete energy `target` on `grid`.
ProfileSpec match_energy(const ProfileSpec& profile, const Grid& grid, const ModelParams& model, double target);

}  // namespace nlw
