#include "nlw/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlw/errors.hpp"
#include "nlw/random.hpp"

namespace nlw {

namespace {

constexpr int kMaxLevels = 26;

std::size_t intervals_at(int n) { return std::size_t{1} << n; }

}  // namespace

LipschitzSample::LipschitzSample(std::vector<double> values, int n_max, double lip_bound)
    : values_(std::move(values)), n_max_(n_max), lip_bound_(lip_bound) {
  if (n_max < 1 || n_max > kMaxLevels) throw InvalidInput("LipschitzSample: n_max must be in [1, 26]");
  if (!(lip_bound > 0.0) || !std::isfinite(lip_bound)) throw InvalidInput("LipschitzSample: need lip_bound > 0");
  if (values_.size() != intervals_at(n_max) + 1) throw InvalidInput("LipschitzSample: need 2^n_max + 1 values");
  spacing_ = 2.0 / static_cast<double>(intervals_at(n_max));
  const double mid = values_[values_.size() / 2];
  for (double& v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("LipschitzSample: non-finite value");
    v -= mid;
  }
  const double allowed = lip_bound * spacing_ * (1.0 + 1e-12);
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    if (std::fabs(values_[i + 1] - values_[i]) > allowed) {
      std::ostringstream msg;
      msg << "LipschitzSample: adjacent samples " << i << ", " << i + 1 << " exceed lip_bound " << lip_bound;
      throw InvalidInput(msg.str());
    }
  }
}

LipschitzSample sample_function(const std::function<double(double)>& f, int n_max, double lip_bound) {
  if (n_max < 1 || n_max > kMaxLevels) throw InvalidInput("sample_function: n_max must be in [1, 26]");
  const std::size_t n = intervals_at(n_max);
  const double h = 2.0 / static_cast<double>(n);
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) v[i] = f(-1.0 + static_cast<double>(i) * h);
  return LipschitzSample(std::move(v), n_max, lip_bound);
}

LipschitzSample random_lipschitz_sample(std::uint64_t seed, int n_max, double lip_bound) {
  if (n_max < 2 || n_max > kMaxLevels) throw InvalidInput("random_lipschitz_sample: n_max must be in [2, 26]");
  Rng rng(seed);
  const std::size_t n = intervals_at(n_max);
  const double ratio = rng.uniform(0.2, 0.35);
  const int first = 1 + static_cast<int>(rng.bits() % 3);
  const int step = 2 + static_cast<int>(rng.bits() % 2);

  // Slopes on the finest grid accumulate one walk per level.
  std::vector<double> slope(n, 0.0);
  double weight = 1.0;
  for (int level = first; level <= n_max; level += step) {
    const std::size_t pieces = intervals_at(level);
    const std::size_t run = n / pieces;
    for (std::size_t piece = 0; piece < pieces; ++piece) {
      const double s = weight * rng.uniform(-1.0, 1.0);
      for (std::size_t i = piece * run; i < (piece + 1) * run; ++i) slope[i] += s;
    }
    weight *= ratio;
  }
  double peak = 0.0;
  for (double s : slope) peak = std::max(peak, std::fabs(s));
  const double scale = peak > 0.0 ? lip_bound / peak : 0.0;
  const double h = 2.0 / static_cast<double>(n);
  std::vector<double> v(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i + 1] = v[i] + scale * slope[i] * h;
  return LipschitzSample(std::move(v), n_max, lip_bound);
}

double MultiscaleDecomposition::interval_length(int n) const { return 2.0 / static_cast<double>(intervals_at(n)); }

double MultiscaleDecomposition::total_energy() const {
  double s = 0.0;
  for (double e : band_energies) s += e;
  return s;
}

MultiscaleDecomposition decompose(const LipschitzSample& sample) {
  MultiscaleDecomposition dec;
  dec.n_max = sample.n_max();
  dec.lip_bound = sample.lip_bound();
  dec.slopes.resize(static_cast<std::size_t>(dec.n_max) + 1);
  const auto& v = sample.values();
  for (int n = 0; n <= dec.n_max; ++n) {
    const std::size_t pieces = intervals_at(n);
    const std::size_t stride = intervals_at(dec.n_max - n);
    const double h = dec.interval_length(n);
    auto& s = dec.slopes[static_cast<std::size_t>(n)];
    s.resize(pieces);
    for (std::size_t i = 0; i < pieces; ++i) s[i] = (v[(i + 1) * stride] - v[i * stride]) / h;
  }
  dec.band_energies.resize(static_cast<std::size_t>(dec.n_max));
  for (int n = 0; n < dec.n_max; ++n) {
    const auto& parent = dec.slopes[static_cast<std::size_t>(n)];
    const auto& child = dec.slopes[static_cast<std::size_t>(n) + 1];
    double e = 0.0;
    for (std::size_t i = 0; i < child.size(); ++i) {
      const double d = child[i] - parent[i / 2];
      e += d * d;
    }
    dec.band_energies[static_cast<std::size_t>(n)] = e * dec.interval_length(n + 1);
  }
  return dec;
}

double band_inner_product(const MultiscaleDecomposition& dec, int n, int m) {
  if (n < 0 || m < 0 || n >= dec.n_max || m >= dec.n_max) throw InvalidInput("band_inner_product: level out of range");
  if (n > m) std::swap(n, m);
  const auto& pn = dec.slopes[static_cast<std::size_t>(n)];
  const auto& cn = dec.slopes[static_cast<std::size_t>(n) + 1];
  const auto& pm = dec.slopes[static_cast<std::size_t>(m)];
  const auto& cm = dec.slopes[static_cast<std::size_t>(m) + 1];
  // Band n is constant on level n+1 intervals; integrate on level m+1.
  const std::size_t shift = static_cast<std::size_t>(m - n);
  double s = 0.0;
  for (std::size_t i = 0; i < cm.size(); ++i) {
    const std::size_t in = i >> shift;
    const double dn = cn[in] - pn[in / 2];
    const double dm = cm[i] - pm[i / 2];
    s += dn * dm;
  }
  return s * dec.interval_length(m + 1);
}

QuietScaleResult find_quiet_scale(const MultiscaleDecomposition& dec, double sigma, int K) {
  if (!(sigma > 0.0)) throw InvalidInput("find_quiet_scale: need sigma > 0");
  if (K < 1) throw InvalidInput("find_quiet_scale: need K >= 1");
  QuietScaleResult q;
  q.sigma = sigma;
  q.K = K;
  for (int n0 = 1; n0 + K < dec.n_max; n0 += K + 1) {
    ++q.probes;
    double sum = 0.0;
    for (int n = n0; n <= n0 + K; ++n) sum += dec.band_energies[static_cast<std::size_t>(n)];
    if (sum <= sigma) {
      q.n0 = n0;
      q.band_sum = sum;
      q.r = sigma * std::ldexp(1.0, -n0);
      return q;
    }
  }
  std::ostringstream msg;
  msg << "find_quiet_scale: no window of " << K + 1 << " levels with band sum <= " << sigma << " within "
      << dec.n_max << " sampled levels; sample at a finer resolution";
  throw InvalidInput(msg.str());
}

ApproxDiffSet approx_diff_set(const LipschitzSample& sample, const MultiscaleDecomposition& dec,
                              const QuietScaleResult& quiet, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("approx_diff_set: need delta > 0");
  if (quiet.n0 < 0 || quiet.n0 > dec.n_max || !(quiet.r > 0.0)) throw InvalidInput("approx_diff_set: bad quiet scale");
  const double h = sample.spacing();
  const double r = quiet.r;
  const double inner = delta * r;
  if (inner < h * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "approx_diff_set: inner radius " << inner << " is below the sample spacing " << h;
    throw InvalidInput(msg.str());
  }
  const auto lo = static_cast<std::size_t>(std::ceil(inner / h - 1e-9));
  const auto hi = static_cast<std::size_t>(std::floor(r / h + 1e-9));
  const auto& slopes = dec.slopes[static_cast<std::size_t>(quiet.n0)];
  const std::size_t stride = std::size_t{1} << (dec.n_max - quiet.n0);
  const std::size_t n = sample.size();

  ApproxDiffSet out;
  out.delta = delta;
  out.r = r;
  const double* f = sample.values().data();
  for (std::size_t i = 0; i < n; ++i) {
    const double L = slopes[std::min(i / stride, slopes.size() - 1)];
    const double fx = f[i];
    // |f(y) - f(x) - L (y - x)| <= delta |y - x|, scanned in blocks so the
    // inner loop stays branch-free.
    bool ok = true;
    const std::size_t right = std::min(hi, n - 1 - i);
    const std::size_t left = std::min(hi, i);
    for (std::size_t k0 = lo; ok && k0 <= std::max(right, left); k0 += 64) {
      const std::size_t k1 = std::min(k0 + 64, std::max(right, left) + 1);
      double worst = 0.0;
      for (std::size_t k = k0; k < std::min(k1, right + 1); ++k) {
        const double d = static_cast<double>(k) * h;
        worst = std::max(worst, std::fabs(f[i + k] - fx - L * d) - delta * d);
      }
      for (std::size_t k = k0; k < std::min(k1, left + 1); ++k) {
        const double d = static_cast<double>(k) * h;
        worst = std::max(worst, std::fabs(fx - f[i - k] - L * d) - delta * d);
      }
      ok = worst <= 0.0;
    }
    if (ok) {
      out.points.push_back(i);
      out.slopes.push_back(L);
    }
  }
  out.measure = static_cast<double>(out.points.size()) * h;
  out.accepted_fraction = static_cast<double>(out.points.size()) / static_cast<double>(n);
  return out;
}

RademacherReport run_rademacher(const LipschitzSample& sample, const RademacherParams& params) {
  RademacherReport rep;
  rep.params = params;
  rep.lip_bound = sample.lip_bound();
  const MultiscaleDecomposition dec = decompose(sample);
  rep.band_energies = dec.band_energies;
  rep.quiet = find_quiet_scale(dec, params.sigma, params.K);
  rep.set = approx_diff_set(sample, dec, rep.quiet, params.delta);
  return rep;
}

}  // namespace nlw
