#pragma once

#include <cstdint>
#include <random>

namespace crawlnet {

// Seeded random source. std::mt19937_64 output is fully specified by the
// standard and the double mapping below is done by hand, so a given seed
// yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace crawlnet
