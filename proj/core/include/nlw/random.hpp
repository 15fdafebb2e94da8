#pragma once

#include <cstdint>
#include <random>

namespace nlw {

// Seeded generator with a platform-independent real mapping.
// std::uniform_real_distribution is implementation-defined, so reals are
// built from the top 53 bits of mt19937_64 directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nlw
