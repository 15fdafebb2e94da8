#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace nlw {

/// f on [-1, 1] sampled at the 2^n_max + 1 dyadic points, shifted so that
/// f(0) = 0. Between samples f is taken piecewise linear.
class LipschitzSample {
 public:
  /// Validates size and the Lipschitz bound on adjacent samples (InvalidInput).
  LipschitzSample(std::vector<double> values, int n_max, double lip_bound = 1.0);

  int n_max() const { return n_max_; }
  double lip_bound() const { return lip_bound_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t i) const { return -1.0 + static_cast<double>(i) * spacing_; }
  double value(std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
  int n_max_;
  double lip_bound_;
  double spacing_;
};

LipschitzSample sample_function(const std::function<double(double)>& f, int n_max, double lip_bound = 1.0);

/// Seeded multiscale random walk: a geometric sum of piecewise-linear walks
/// with uniform slopes at successively finer dyadic levels, rescaled so the
/// Lipschitz constant is at most lip_bound.
LipschitzSample random_lipschitz_sample(std::uint64_t seed, int n_max, double lip_bound = 1.0);

/// Level n holds the slopes of f_n, the interpolant at multiples of 2^{1-n}
/// (2^n intervals). band_energies[n] = ||f_{n+1} - f_n||^2 in the homogeneous
/// H^1 norm, n = 0 .. n_max - 1.
struct MultiscaleDecomposition {
  int n_max = 0;
  double lip_bound = 1.0;
  std::vector<std::vector<double>> slopes;
  std::vector<double> band_energies;

  double interval_length(int n) const;
  double total_energy() const;
};

MultiscaleDecomposition decompose(const LipschitzSample& sample);

/// <f_{n+1} - f_n, f_{m+1} - f_m> in homogeneous H^1, computed from slopes.
double band_inner_product(const MultiscaleDecomposition& dec, int n, int m);

/// Windows [n0, n0 + K] probed at n0 = 1, K + 2, 2K + 3, ...
struct QuietScaleResult {
  int n0 = 0;
  double r = 0.0;
  double sigma = 0.0;
  int K = 0;
  double band_sum = 0.0;
  int probes = 0;
};

/// First window whose band sum is at most sigma; r = sigma 2^{-n0}. Throws
/// InvalidInput when the sampled levels run out first.
QuietScaleResult find_quiet_scale(const MultiscaleDecomposition& dec, double sigma, int K);

/// Sample points x where one slope L(x) (the f_{n0} slope at x) keeps every
/// difference quotient over delta r <= |y - x| <= r within delta.
struct ApproxDiffSet {
  double delta = 0.0;
  double r = 0.0;
  std::vector<std::size_t> points;
  std::vector<double> slopes;
  double measure = 0.0;
  double accepted_fraction = 0.0;
};

/// Throws InvalidInput when delta r is below the sample spacing.
ApproxDiffSet approx_diff_set(const LipschitzSample& sample, const MultiscaleDecomposition& dec,
                              const QuietScaleResult& quiet, double delta);

/// Defaults: sigma = delta^2 / 2, K = 2, 2^20 intervals.
struct RademacherParams {
  double delta = 0.1;
  double sigma = 0.005;
  int K = 2;
  int n_max = 20;
};

struct RademacherReport {
  RademacherParams params;
  double lip_bound = 1.0;
  QuietScaleResult quiet;
  ApproxDiffSet set;
  std::vector<double> band_energies;
};

RademacherReport run_rademacher(const LipschitzSample& sample, const RademacherParams& params);

}  // namespace nlw
