#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

namespace canonpair {

// Deterministic, platform-pinned sampling. Checks derive a stream from
// (master seed, check id, model, ...) so results do not depend on execution
// order; std::normal_distribution is implementation-defined, so the Gaussian
// is generated explicitly via Box-Muller on splitmix64 uniforms.

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t mix_seed(uint64_t master, std::string_view tag) {
  uint64_t h = fnv1a64(tag);
  h ^= master + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

class SampleRng {
 public:
  explicit SampleRng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]; never returns exactly 0 so log() below is safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    const double u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }

  std::complex<double> complex_normal() {
    const double u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    return {r * std::cos(2.0 * M_PI * v), r * std::sin(2.0 * M_PI * v)};
  }

 private:
  uint64_t state_;
};

}  // namespace canonpair
