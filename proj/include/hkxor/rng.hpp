// Counter-based SplitMix64 streams.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hkxor {

inline constexpr const char* kRngId = "splitmix64-ctr";

inline uint64_t splitmix64_mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Output i of the stream is mix(key + (i+1) * golden), key derived from (seed, stream).
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream)
      : key_(splitmix64_mix(seed ^ splitmix64_mix(stream + 0x5851F42D4C957F2Dull))) {}

  uint64_t at(uint64_t i) const { return splitmix64_mix(key_ + (i + 1) * 0x9E3779B97F4A7C15ull); }
  uint64_t next() { return at(ctr_++); }
  uint64_t counter() const { return ctr_; }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, bound).
  uint64_t below(uint64_t bound) {
    const uint64_t lim = ~uint64_t{0} - (~uint64_t{0} % bound);
    for (;;) {
      const uint64_t v = next();
      if (v < lim) return v % bound;
    }
  }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  int sign() { return (next() >> 63) ? -1 : 1; }

 private:
  uint64_t key_;
  uint64_t ctr_ = 0;
};

}  // namespace hkxor
