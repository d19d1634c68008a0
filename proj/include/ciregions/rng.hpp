#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ciregions {

/// Deterministic 64-bit generator (splitmix64). Used everywhere instead of
/// std:: distributions so that seeded runs are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0,1]; safe as a log argument.
  double next_positive() { return 1.0 - next_double(); }

  double next_gaussian() {
    // Box-Muller; one value per call keeps the stream simple to reason about.
    double u1 = next_positive();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  /// Symmetric Dirichlet(1) draw, i.e. uniform on the k-simplex.
  std::vector<double> next_simplex(std::size_t k) {
    std::vector<double> v(k);
    double sum = 0.0;
    for (auto& x : v) {
      x = -std::log(next_positive());
      sum += x;
    }
    for (auto& x : v) x /= sum;
    return v;
  }

  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(next_u64() % n);
  }

 private:
  std::uint64_t state_;
};

/// Derives a per-task seed from a master seed; tasks with distinct indices
/// get decorrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  Rng r(master ^ (0xD1B54A32D192ED03ull * (index + 1)));
  return r.next_u64();
}

}  // namespace ciregions
