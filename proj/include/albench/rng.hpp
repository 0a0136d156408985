#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace albench {

// splitmix64 finalizer. All randomness in the project flows through this so
// that runs are bit-identical across platforms; std::random distributions
// (which libstdc++/libc++ implement differently) are avoided on purpose.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double unit_from_bits(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Order-independent stream: the value for a given (seed, counter) pair does
// not depend on any other draw. Used by the random scorers so that results
// are invariant to example enumeration order.
inline double unit_from(uint64_t seed, uint64_t counter) {
  return unit_from_bits(mix64(seed ^ mix64(counter + 0x632be59bd9b4e019ULL)));
}

// Sub-seed derivation from (master seed, purpose tag, indices). Changing one
// component's draws never perturbs another's.
uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t a = 0, uint64_t b = 0);

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double next_unit() { return unit_from_bits(next_u64()); }

  // [0, bound), bound >= 1. Multiply-shift; bias is < 2^-53 per draw.
  int next_below(int bound) {
    return static_cast<int>(next_unit() * static_cast<double>(bound));
  }

  // Standard normal via Box-Muller. Consumes two uniforms per call.
  double next_gaussian() {
    double u1 = next_unit();
    double u2 = next_unit();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  uint64_t state_;
};

}  // namespace albench
