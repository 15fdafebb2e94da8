#include "nlw/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlw/errors.hpp"

namespace nlw {

Spacetime::Spacetime(const Trajectory& forward) : forward_(&forward) {
  if (forward.empty()) throw InvalidInput("Spacetime: empty trajectory");
  for (std::size_t k = 0; k < forward.size(); ++k) frames_.push_back(forward.frame(k));
  for (std::size_t k = 0; k < frames_.size(); ++k) level_frames_.push_back(k);
}

Spacetime::Spacetime(const Trajectory& forward, const Trajectory& backward) : forward_(&forward) {
  if (forward.empty() || backward.empty()) throw InvalidInput("Spacetime: empty trajectory");
  if (!(forward.grid() == backward.grid())) throw InvalidInput("Spacetime: grid mismatch");
  const double dt = backward.dt();
  for (std::size_t k = backward.size(); k-- > 0;) {
    const double t = backward.time(k);
    frames_.push_back(FrameRef{-t, backward.level0(k), -(t + dt), backward.level1(k)});
  }
  for (std::size_t k = 0; k < forward.size(); ++k) frames_.push_back(forward.frame(k));
  for (std::size_t k = 0; k < frames_.size(); ++k) {
    if (k > 0 && frames_[k].t0 == frames_[k - 1].t0) continue;
    level_frames_.push_back(k);
  }
}

double interpolate(const Grid& grid, std::span<const double> values, double x) {
  const double s = (x - grid.x_min) / grid.dx;
  const double last = static_cast<double>(grid.n_points - 1);
  if (!(s >= -1e-9) || !(s <= last + 1e-9)) {
    std::ostringstream msg;
    msg << "interpolate: x = " << x << " outside the grid [" << grid.x_min << ", " << grid.x_max << "]";
    throw PaddingViolation(msg.str());
  }
  const double sc = std::clamp(s, 0.0, last);
  auto j = static_cast<std::size_t>(std::floor(sc));
  if (j >= grid.n_points - 1) j = grid.n_points - 2;
  const double w = sc - static_cast<double>(j);
  return (1.0 - w) * values[j] + w * values[j + 1];
}

double integrate_trapezoid(std::span<const double> t, std::span<const double> f, double a, double b) {
  if (t.size() != f.size() || t.size() < 2) throw InvalidInput("integrate_trapezoid: need >= 2 samples");
  if (a > b) throw InvalidInput("integrate_trapezoid: a > b");
  const double slack = 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
  if (a < t.front() - slack || b > t.back() + slack) {
    std::ostringstream msg;
    msg << "integrate_trapezoid: [" << a << ", " << b << "] not covered by samples [" << t.front() << ", "
        << t.back() << "]";
    throw InvalidInput(msg.str());
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double t0 = t[i], t1 = t[i + 1];
    if (t1 <= t0) continue;
    const double lo = std::max(t0, a), hi = std::min(t1, b);
    if (hi <= lo) continue;
    const double f_lo = f[i] + (f[i + 1] - f[i]) * (lo - t0) / (t1 - t0);
    const double f_hi = f[i] + (f[i + 1] - f[i]) * (hi - t0) / (t1 - t0);
    total += 0.5 * (f_lo + f_hi) * (hi - lo);
  }
  return total;
}

}  // namespace nlw
