#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nlw/spacetime.hpp"

namespace nlw {

/// Empirical Hölder-1/2 constants of a recorded solution:
///   space: max |u(t,x) - u(t,x')| / |x - x'|^{1/2}
///   time:  max |u(t,x) - u(t',x)| / |t - t'|^{1/2}
/// over all frames and dyadic lags (1, 2, 4, ... grid cells or frames).
struct HolderConstants {
  double C_space = 0.0;
  double C_time = 0.0;
};

HolderConstants holder_check(const Spacetime& st);

struct TraceEntry {
  double t = 0.0;
  double x = 0.0;
  double value = 0.0;
};

/// 1-separated times at which max|u| reaches the threshold, with the leftmost
/// argmax. The source span [span_lo, span_hi] has half-length T_n.
struct ConcentrationTrace {
  double threshold = 0.0;
  double span_lo = 0.0;
  double span_hi = 0.0;
  std::vector<TraceEntry> entries;

  double half_span() const { return 0.5 * (span_hi - span_lo); }
};

/// Greedy left-to-right scan over the stored levels.
ConcentrationTrace concentration_times(const Spacetime& st, double threshold);

/// |x2 - x1| >= |t2 - t1| + 1 (boundary included).
bool is_spacelike(const TraceEntry& a, const TraceEntry& b);

enum class ParticleMode {
  exact,   // branch-and-bound maximum clique, at most kMaxExactEntries entries
  greedy,  // lower bound
  chain,   // longest chain of the spacelike order; exact at any size
};

inline constexpr std::size_t kMaxExactEntries = 20;

/// Largest pairwise-spacelike subset size. Throws InvalidInput for exact mode
/// on traces longer than kMaxExactEntries.
std::size_t particle_number(const std::vector<TraceEntry>& entries, ParticleMode mode);
std::size_t particle_number(const ConcentrationTrace& trace, ParticleMode mode);

/// eps0(c) = min(c, eps_hat c^2).
struct Eps0Family {
  double eps_hat = 0.1;
  double operator()(double c) const;
};

enum class DichotomyOutcome {
  lipschitz,     // every pair of the dense part satisfies the Lipschitz bound
  reduced,       // a half of one dense interval, spacelike to the witness
  inconclusive,  // violating pair found but the halves are not separable
};

struct DichotomyResult {
  DichotomyOutcome outcome = DichotomyOutcome::lipschitz;
  std::vector<TraceEntry> subset;
  /// Entry spacelike to every member of `subset` (reduced outcome only).
  std::optional<TraceEntry> witness;
  /// Particle-number bound carried by `subset`.
  int m = 0;
  std::size_t intervals = 0;
  std::size_t dense_intervals = 0;
};

/// One dichotomy step on `subset` (sorted by t) over a span of half-length
/// T_n starting at span_lo. Requires #subset >= 2 c T_n and m >= 1.
DichotomyResult dichotomy_step(const std::vector<TraceEntry>& subset, double span_lo, double T_n, double c,
                               double eps0, int m);

/// Re-checks a reduced outcome: every subset entry is spacelike to the witness.
bool verify_certificate(const DichotomyResult& result);

/// x'(t) = min over base points (x(t') + |t - t'|).
struct LipschitzEnvelope {
  std::vector<TraceEntry> base;
};

double envelope_evaluate(const LipschitzEnvelope& env, double t);

struct WorldlineExtraction {
  bool success = false;
  std::string outcome;
  double c = 0.0;
  double c0 = 0.0;
  double T_n = 0.0;
  Eps0Family eps0;
  int iterations = 0;
  std::vector<TraceEntry> selected;
  LipschitzEnvelope envelope;

  double eps0_value() const { return eps0(c); }
};

/// Iterates dichotomy_step at most m_max times, starting from
/// c = min(1, #trace / (2 T_n)) and shrinking c by eps0(c)/32 per reduction.
WorldlineExtraction extract_lipschitz_worldline(const ConcentrationTrace& trace, const Eps0Family& eps0,
                                                int m_max);

}  // namespace nlw
