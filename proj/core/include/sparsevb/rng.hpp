#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sparsevb {

// splitmix64 finalizer. Used for seed expansion and stream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for sub-stream k of the stream identified by `seed`. A pure function
// of (seed, k), so replicates can run in parallel and still reproduce the
// sequential results bit for bit.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t k) {
  return mix64(mix64(seed) + 0x9E3779B97F4A7C15ULL * (k + 1));
}

// xoshiro256++ with explicit sampling transforms. The standard library
// distributions are implementation-defined, so they cannot back the
// cross-run byte-identity guarantees this project makes; every transform
// here is pinned.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) {
      sm += 0x9E3779B97F4A7C15ULL;
      word = mix64(sm);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via the trigonometric Box-Muller transform. Two uniforms
  // per draw, no caching, so the consumption pattern is easy to reason about.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi_v<double> * u2);
  }

  // Laplace(0, scale) by inverse CDF.
  double laplace(double scale) {
    double v;
    do {
      v = uniform01();
    } while (v == 0.0);
    return v < 0.5 ? scale * std::log(2.0 * v) : -scale * std::log(2.0 * (1.0 - v));
  }

  // Student t with 3 degrees of freedom: Z0 / sqrt((Z1^2 + Z2^2 + Z3^2) / 3).
  double student_t3() {
    const double z0 = normal();
    double s;
    do {
      const double z1 = normal();
      const double z2 = normal();
      const double z3 = normal();
      s = (z1 * z1 + z2 * z2 + z3 * z3) / 3.0;
    } while (s == 0.0);
    return z0 / std::sqrt(s);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace sparsevb
