#pragma once

#include <cstdint>
#include <random>

namespace charwnn {

// Seeded generator with distribution code written out explicitly, so that
// sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (-r, r).
  double symmetric(double r) {
    for (;;) {
      const double v = -r + 2.0 * r * uniform01();
      if (v > -r && v < r) return v;
    }
  }

  // Uniform integer in [0, n), n > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      const std::uint64_t v = engine_();
      if (v < limit) return v % n;
    }
  }

  template <typename Range>
  void shuffle(Range& range) {
    const auto n = static_cast<std::uint64_t>(range.size());
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      std::swap(range[i - 1], range[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace charwnn
