#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace isacsim {

/// splitmix64 step, used to mix seed components into stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d9575eb8c7e1f5ULL;
  return x ^ (x >> 31);
}

/// Order-insensitive-free seed derivation: hash(root, a, b, c) chains
/// splitmix64 so every (scenario, snr, realization) cell gets an
/// independent, reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = splitmix64(root ^ 0x243f6a8885a308d3ULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  s = splitmix64(s ^ c);
  return s;
}

/// Deterministic RNG wrapper. Only the raw mt19937_64 stream is consumed
/// (that sequence is pinned by the standard); the double and Gaussian
/// transforms are done here instead of through std distributions, whose
/// output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t uniform_index(std::uint64_t n) {
    // modulo bias is irrelevant at n << 2^64
    return gen_() % n;
  }

  /// Standard normal via Box-Muller (no cached spare, keeps state minimal).
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * M_PI * u2);
  }

  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_gaussian(double variance) {
    const double s = std::sqrt(variance / 2.0);
    return {s * gaussian(), s * gaussian()};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace isacsim
