#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlw/integrator.hpp"

namespace nlw {

/// Time-ordered read-only view over one forward trajectory, or over a
/// forward/backward pair covering [-t_final, t_final]. Backward frames are
/// mapped to negative times and their u_t sign flips through FrameRef (t1 < t0).
/// The view does not own the trajectories.
class Spacetime {
 public:
  explicit Spacetime(const Trajectory& forward);
  Spacetime(const Trajectory& forward, const Trajectory& backward);
  explicit Spacetime(const SymmetricRun& run) : Spacetime(run.forward, run.backward) {}

  const Grid& grid() const { return forward_->grid(); }
  const ModelParams& model() const { return forward_->model(); }
  std::size_t size() const { return frames_.size(); }
  const FrameRef& frame(std::size_t k) const { return frames_[k]; }

  /// Indices of frames with distinct level-0 times (the t = 0 level appears in
  /// both halves of a symmetric view).
  std::span<const std::size_t> level_frames() const { return level_frames_; }

  double t_min() const { return frames_.front().t0; }
  double t_max() const { return frames_.back().t0; }
  double mid_min() const { return frames_.front().t_mid(); }
  double mid_max() const { return frames_.back().t_mid(); }

  /// Discrete energy of the first forward frame.
  double initial_energy() const { return forward_->energy(0); }

 private:
  const Trajectory* forward_;
  std::vector<FrameRef> frames_;
  std::vector<std::size_t> level_frames_;
};

/// Linear interpolation of grid samples at x. Throws PaddingViolation when x
/// is outside the grid.
double interpolate(const Grid& grid, std::span<const double> values, double x);

/// Trapezoid rule over samples (t_i, f_i), t nondecreasing, restricted to
/// [a, b] with linear interpolation at partial end intervals. Throws
/// InvalidInput when [a, b] is not covered by the samples.
double integrate_trapezoid(std::span<const double> t, std::span<const double> f, double a, double b);

}  // namespace nlw
