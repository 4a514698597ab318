#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tvgauss {

/// SplitMix64 finalizer: bijective 64-bit mixer with good avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based generator: output i of a stream is mix64 applied to a Weyl
/// sequence, so a stream is reproducible from its seed alone and streams with
/// distinct seeds are decorrelated.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1]; never 0, so it is safe under log().
  double next_unit() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double next_in(double lo, double hi) noexcept {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) noexcept { return next() % n; }

 private:
  std::uint64_t state_;
};

/// Derives the seed of sub-stream `stream` from a user seed. Used to give each
/// Monte Carlo block (and each generated instance) its own independent stream.
inline constexpr std::uint64_t derive_stream(std::uint64_t seed,
                                             std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream ^ 0xD1B54A32D192ED03ull));
}

/// Standard normal variates via Box-Muller over a SplitMix64 stream.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) noexcept : eng_(seed) {}

  double next() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = eng_.next_unit();
    const double u2 = eng_.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  SplitMix64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tvgauss
