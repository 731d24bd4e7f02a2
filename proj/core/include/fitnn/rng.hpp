// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fitnn {

// Deterministic random stream. All samplers are implemented here instead of
// relying on <random> distributions, whose output sequences differ between
// standard library implementations. Identical seeds must yield identical
// experiment results, so the full draw path is pinned down.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform_double();  // (0, 1], keeps log finite
    const double u2 = uniform_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double sigma) { return sigma * standard_normal(); }

  // Poisson draw by Knuth's product method, chunked so the running product
  // never underflows. Exact for any finite lambda >= 0.
  std::int64_t poisson(double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0)
      throw std::invalid_argument("poisson: lambda must be finite and >= 0");
    std::int64_t total = 0;
    while (lambda > 500.0) {
      total += poisson_knuth(500.0);
      lambda -= 500.0;
    }
    return total + poisson_knuth(lambda);
  }

 private:
  std::int64_t poisson_knuth(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform_double();
    } while (p > limit);
    return k - 1;
  }

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed plus arbitrary tags
// (stream kind, epoch index, bit pattern of a rate, ...).
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t t : tags) h = splitmix64(h ^ t);
  return h;
}

// Stream tags; keep stable, they are part of run reproducibility.
inline constexpr std::uint64_t kStreamInit = 0x01;
inline constexpr std::uint64_t kStreamTrain = 0x02;
inline constexpr std::uint64_t kStreamEval = 0x03;

}  // namespace fitnn
