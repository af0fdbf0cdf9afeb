#pragma once

#include <cmath>
#include <cstdint>

namespace deepspline {

/// Deterministic counter-based generator built on splitmix64.
///
/// A generator is addressed by (seed, stream): the internal state starts at
/// mix(seed + GOLDEN * (stream + 1)) and every output is mix of the state
/// advanced by GOLDEN. Streams derived from distinct ids are independent for
/// practical purposes and fully reproducible, which is what the training,
/// data-generation and sweep code relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed + kGolden * (stream + 1))) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix(state_);
  }

  /// Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via Box-Muller (cosine branch; the sine draw is unused).
  double next_gaussian() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Uniform in [0, n). Modulo bias is negligible for the shuffle sizes here.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace deepspline
