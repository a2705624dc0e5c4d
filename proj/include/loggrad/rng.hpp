#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <string_view>

namespace loggrad {

// 64-bit FNV-1a, used for config hashes and seed derivation.
inline uint64_t fnv1a64(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t mix_seed(uint64_t seed, std::string_view tag) {
  uint64_t h = fnv1a64(tag);
  // splitmix64 finalizer
  uint64_t z = seed + 0x9e3779b97f4a7c15ull + h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic RNG. mt19937_64 output is fixed by the standard; the
// distributions below are hand-rolled because std::*_distribution is
// implementation-defined and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), n > 0. Rejection-free modulo is fine here;
  // bias is negligible for n << 2^64 and determinism is what matters.
  uint64_t uniform_index(uint64_t n) { return gen_() % n; }

  // Box-Muller; one value per call, cached pair discarded for simplicity.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace loggrad
