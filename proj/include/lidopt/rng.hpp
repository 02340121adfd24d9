#pragma once

#include <cstdint>
#include <random>

namespace lidopt {

/// Seeded uniform source with a fixed bit-to-double mapping, so streams are
/// reproducible across standard-library implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  /// Uniform integer in [0, n), n >= 1.
  int below(int n) {
    const int k = static_cast<int>(u01() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace lidopt
