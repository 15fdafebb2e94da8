#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nlw/field.hpp"
#include "nlw/integrator.hpp"
#include "nlw/rademacher.hpp"
#include "nlw/worldline.hpp"

namespace nlw {

struct ParallelogramSweep {
  double t0 = 0.0;
  double x0 = 0.0;
  std::vector<double> v{0.0, 0.5, 0.9, 0.99, 1.0, 1.01};
  std::vector<double> R{1.0, 2.0, 4.0, 8.0};
  std::vector<double> T{8.0, 16.0, 32.0, 64.0};
};

/// Everything a run needs. INI layout (all keys optional):
///
///   [profile]  kind = gaussian|traveling|bump|noise|zero, amplitude, center,
///              width, direction, seed, cutoff, modes
///   [model]    p, defocusing
///   [solver]   cfl, newton_tol, newton_max_iter, record_stride
///   [grid]     dx, half_width (0 = sized from the profile and t_final)
///   [run]      t_final, symmetric, T_list, seed
///   [worldline] threshold, eps_hat
///   [flux]     rays, t0, x0, v, R, T, calibration_C
///   [rademacher] delta, sigma, K, n_max, samples
///   [output]   dir
struct ExperimentConfig {
  ProfileSpec profile = GaussianProfile{};
  ModelParams model;
  SolverParams solver{0.5, 1e-13, 60, 10};
  double dx = 0.02;
  double half_width = 0.0;
  double t_final = 64.0;
  bool symmetric = true;
  std::vector<double> T_list{8.0, 16.0, 32.0, 64.0};
  std::uint64_t seed = 1;

  double threshold = 0.5;
  Eps0Family eps0;

  int rays = 25;
  ParallelogramSweep sweep;
  double calibration_C = 0.0;  // 0 = not calibrated

  RademacherParams rademacher;
  int rademacher_samples = 8;

  std::filesystem::path output_dir = "out";

  /// Throws InvalidInput on any invalid sub-config.
  void validate() const;
  /// Padded grid; half_width = 0 sizes it to hold the light cone of the
  /// data over t_final and the parallelogram sweep.
  Grid grid() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical INI text of a config; parse_config(to_ini(c)) reproduces c.
std::string to_ini(const ExperimentConfig& config);

}  // namespace nlw
