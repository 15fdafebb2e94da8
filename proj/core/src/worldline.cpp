#include "nlw/worldline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "nlw/errors.hpp"

namespace nlw {

HolderConstants holder_check(const Spacetime& st) {
  HolderConstants out;
  const Grid& g = st.grid();
  const std::size_t n = g.n_points;
  const auto levels = st.level_frames();

  for (std::size_t k : levels) {
    const auto u = st.frame(k).u0;
    for (std::size_t lag = 1; lag < n; lag *= 2) {
      const double inv = 1.0 / std::sqrt(static_cast<double>(lag) * g.dx);
      double m = 0.0;
      for (std::size_t j = 0; j + lag < n; ++j) m = std::max(m, std::fabs(u[j + lag] - u[j]));
      out.C_space = std::max(out.C_space, m * inv);
    }
  }

  // Within-frame step (lag dt), then dyadic lags across stored levels.
  for (std::size_t k = 0; k < st.size(); ++k) {
    const FrameRef& f = st.frame(k);
    const double inv = 1.0 / std::sqrt(std::fabs(f.t1 - f.t0));
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::fabs(f.u1[j] - f.u0[j]));
    out.C_time = std::max(out.C_time, m * inv);
  }
  for (std::size_t lag = 1; lag < levels.size(); lag *= 2) {
    for (std::size_t i = 0; i + lag < levels.size(); ++i) {
      const FrameRef& a = st.frame(levels[i]);
      const FrameRef& b = st.frame(levels[i + lag]);
      const double inv = 1.0 / std::sqrt(std::fabs(b.t0 - a.t0));
      double m = 0.0;
      for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::fabs(b.u0[j] - a.u0[j]));
      out.C_time = std::max(out.C_time, m * inv);
    }
  }
  return out;
}

ConcentrationTrace concentration_times(const Spacetime& st, double threshold) {
  if (!(threshold > 0.0)) throw InvalidInput("concentration_times: threshold must be > 0");
  const Grid& g = st.grid();
  ConcentrationTrace trace;
  trace.threshold = threshold;
  trace.span_lo = st.t_min();
  trace.span_hi = st.t_max();
  bool have_last = false;
  double last = 0.0;
  for (std::size_t k : st.level_frames()) {
    const FrameRef& f = st.frame(k);
    if (have_last && f.t0 < last + 1.0 - 1e-9) continue;
    std::size_t arg = 0;
    double peak = -1.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
      const double a = std::fabs(f.u0[j]);
      if (a > peak) {
        peak = a;
        arg = j;
      }
    }
    if (peak < threshold) continue;
    trace.entries.push_back({f.t0, g.x(arg), f.u0[arg]});
    last = f.t0;
    have_last = true;
  }
  return trace;
}

bool is_spacelike(const TraceEntry& a, const TraceEntry& b) {
  return std::fabs(b.x - a.x) >= std::fabs(b.t - a.t) + 1.0;
}

namespace {

struct CliqueSearch {
  std::vector<std::uint32_t> adj;
  std::size_t best = 0;

  void expand(std::uint32_t candidates, std::size_t size) {
    if (candidates == 0) {
      best = std::max(best, size);
      return;
    }
    while (candidates != 0) {
      if (size + static_cast<std::size_t>(std::popcount(candidates)) <= best) return;
      const int v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      expand(candidates & adj[static_cast<std::size_t>(v)], size + 1);
    }
  }
};

std::size_t exact_clique(const std::vector<TraceEntry>& e) {
  CliqueSearch s;
  s.adj.assign(e.size(), 0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i != j && is_spacelike(e[i], e[j])) s.adj[i] |= std::uint32_t{1} << j;
    }
  }
  const std::uint32_t all = e.empty() ? 0 : static_cast<std::uint32_t>((std::uint64_t{1} << e.size()) - 1);
  s.expand(all, 0);
  return s.best;
}

std::vector<TraceEntry> sorted_by_x(std::vector<TraceEntry> e) {
  std::sort(e.begin(), e.end(), [](const TraceEntry& a, const TraceEntry& b) {
    return a.x < b.x || (a.x == b.x && a.t < b.t);
  });
  return e;
}

}  // namespace

std::size_t particle_number(const std::vector<TraceEntry>& entries, ParticleMode mode) {
  if (entries.empty()) return 0;
  switch (mode) {
    case ParticleMode::exact: {
      if (entries.size() > kMaxExactEntries) {
        std::ostringstream msg;
        msg << "particle_number: exact mode supports at most " << kMaxExactEntries << " entries (got "
            << entries.size() << "); use greedy or chain mode";
        throw InvalidInput(msg.str());
      }
      return exact_clique(entries);
    }
    case ParticleMode::greedy: {
      const auto e = sorted_by_x(entries);
      std::vector<TraceEntry> chosen;
      for (const auto& a : e) {
        if (std::all_of(chosen.begin(), chosen.end(), [&](const TraceEntry& b) { return is_spacelike(a, b); })) {
          chosen.push_back(a);
        }
      }
      return chosen.size();
    }
    case ParticleMode::chain: {
      // Spacelike separation is a strict order in x (transitive by the
      // triangle inequality), so pairwise-spacelike sets are chains.
      const auto e = sorted_by_x(entries);
      std::vector<std::size_t> len(e.size(), 1);
      std::size_t best = 1;
      for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (is_spacelike(e[j], e[i])) len[i] = std::max(len[i], len[j] + 1);
        }
        best = std::max(best, len[i]);
      }
      return best;
    }
  }
  return 0;
}

std::size_t particle_number(const ConcentrationTrace& trace, ParticleMode mode) {
  return particle_number(trace.entries, mode);
}

double Eps0Family::operator()(double c) const { return std::min(c, eps_hat * c * c); }

DichotomyResult dichotomy_step(const std::vector<TraceEntry>& subset, double span_lo, double T_n, double c,
                               double eps0, int m) {
  if (m < 1) throw InvalidInput("dichotomy_step: need m >= 1");
  if (!(T_n > 0.0) || !(c > 0.0) || !(eps0 > 0.0) || eps0 > 1.0) {
    throw InvalidInput("dichotomy_step: need T_n > 0, c > 0, 0 < eps0 <= 1");
  }
  if (static_cast<double>(subset.size()) < 2.0 * c * T_n * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "dichotomy_step: subset of " << subset.size() << " entries is below 2 c T_n = " << 2.0 * c * T_n;
    throw InvalidInput(msg.str());
  }
  const double scale = eps0 * T_n;
  const double k_real = std::ceil(8.0 / eps0);
  const double length = 2.0 * T_n / k_real;
  const double last = k_real - 1.0;
  auto interval_of = [&](double t) {
    return static_cast<std::int64_t>(std::clamp(std::floor((t - span_lo) / length), 0.0, last));
  };

  // After sorting by time each interval is a contiguous run.
  std::vector<std::size_t> order(subset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return subset[a].t < subset[b].t; });

  DichotomyResult res;
  res.intervals = static_cast<std::size_t>(k_real);
  const double dense_threshold = c * scale / 8.0;
  std::vector<TraceEntry> dense;
  std::vector<std::int64_t> dense_id;
  for (std::size_t i = 0; i < order.size();) {
    const std::int64_t id = interval_of(subset[order[i]].t);
    std::size_t j = i;
    while (j < order.size() && interval_of(subset[order[j]].t) == id) ++j;
    if (static_cast<double>(j - i) > dense_threshold) {
      ++res.dense_intervals;
      for (std::size_t k = i; k < j; ++k) {
        dense.push_back(subset[order[k]]);
        dense_id.push_back(id);
      }
    }
    i = j;
  }

  // Among violating pairs, keep the split with the largest retained half.
  std::size_t best_size = 0;
  std::vector<TraceEntry> best_half;
  TraceEntry best_witness;
  bool violated = false;
  for (std::size_t a = 0; a < dense.size(); ++a) {
    for (std::size_t b = 0; b < dense.size(); ++b) {
      if (a == b) continue;
      const TraceEntry& e1 = dense[a];
      const TraceEntry& e2 = dense[b];
      if (std::fabs(e2.x - e1.x) <= std::fabs(e2.t - e1.t) + scale) continue;
      violated = true;
      std::vector<TraceEntry> near, far;
      for (std::size_t k = 0; k < dense.size(); ++k) {
        if (dense_id[k] != dense_id[a]) continue;
        (std::fabs(dense[k].x - e1.x) <= 0.5 * scale ? near : far).push_back(dense[k]);
      }
      const bool keep_near = near.size() >= far.size();
      auto& half = keep_near ? near : far;
      if (half.size() > best_size) {
        best_size = half.size();
        best_half = std::move(half);
        best_witness = keep_near ? e2 : e1;
      }
    }
  }

  if (!violated) {
    res.outcome = DichotomyOutcome::lipschitz;
    res.subset = std::move(dense);
    res.m = m;
    return res;
  }
  res.subset = std::move(best_half);
  res.witness = best_witness;
  res.m = m - 1;
  res.outcome = verify_certificate(res) ? DichotomyOutcome::reduced : DichotomyOutcome::inconclusive;
  if (res.outcome == DichotomyOutcome::reduced &&
      static_cast<double>(res.subset.size()) < c * scale / 16.0) {
    throw NumericalFault("dichotomy_step: reduced subset below c eps0 T_n / 16");
  }
  return res;
}

bool verify_certificate(const DichotomyResult& result) {
  if (!result.witness) return false;
  return std::all_of(result.subset.begin(), result.subset.end(),
                     [&](const TraceEntry& e) { return is_spacelike(e, *result.witness); });
}

double envelope_evaluate(const LipschitzEnvelope& env, double t) {
  if (env.base.empty()) throw InvalidInput("envelope_evaluate: no base points");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : env.base) best = std::min(best, b.x + std::fabs(t - b.t));
  return best;
}

WorldlineExtraction extract_lipschitz_worldline(const ConcentrationTrace& trace, const Eps0Family& eps0,
                                                int m_max) {
  WorldlineExtraction out;
  out.eps0 = eps0;
  out.T_n = trace.half_span();
  if (trace.entries.empty() || !(out.T_n > 0.0)) {
    out.outcome = "empty_trace";
    return out;
  }
  if (m_max < 1) throw InvalidInput("extract_lipschitz_worldline: need m_max >= 1");
  out.c = std::min(1.0, static_cast<double>(trace.entries.size()) / (2.0 * out.T_n));
  out.c0 = out.c;

  std::vector<TraceEntry> subset = trace.entries;
  int m = m_max;
  for (int call = 0; call < m_max; ++call) {
    const double e = eps0(out.c);
    if (static_cast<double>(subset.size()) < 2.0 * out.c * out.T_n * (1.0 - 1e-12)) {
      out.outcome = "precondition";
      return out;
    }
    const DichotomyResult r = dichotomy_step(subset, trace.span_lo, out.T_n, out.c, e, m);
    if (r.outcome == DichotomyOutcome::lipschitz) {
      out.success = !r.subset.empty();
      out.outcome = out.success ? "lipschitz" : "no_dense_interval";
      out.selected = r.subset;
      out.envelope.base = r.subset;
      return out;
    }
    if (r.outcome == DichotomyOutcome::inconclusive) {
      out.outcome = "certificate_failed";
      return out;
    }
    ++out.iterations;
    subset = r.subset;
    m = r.m;
    out.c = out.c * e / 32.0;
    if (m < 1) break;
  }
  out.outcome = "iteration_cap";
  return out;
}

}  // namespace nlw
