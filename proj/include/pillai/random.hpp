#pragma once

// Reproducible random streams. Each stream is a SplitMix64 sequence whose
// starting state is derived from (seed, stream index, attempt), so streams
// can be generated in any order or in parallel with identical results.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace pillai {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    return mix64(state_ += 0x9e3779b97f4a7c15ull);
  }

 private:
  std::uint64_t state_;
};

/// Independent stream for replicate `stream`; `attempt` bumps the sub-seed
/// when a draw has to be rejected and redrawn.
constexpr SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t attempt = 0) noexcept {
  std::uint64_t s = mix64(seed ^ 0x6a09e667f3bcc909ull);
  s = mix64(s + 0x9e3779b97f4a7c15ull * (stream + 1));
  s = mix64(s ^ (0xbb67ae8584caa73bull * (attempt + 1)));
  return SplitMix64(s);
}

/// Uniform double on the open interval (0, 1) from the top 53 bits.
inline double uniform_open01(SplitMix64& gen) noexcept {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal variates by the Box-Muller transform. Both variates of a
/// pair are used; the cosine branch is returned first.
class GaussianSampler {
 public:
  explicit GaussianSampler(SplitMix64 gen) noexcept : gen_(gen) {}

  double operator()() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open01(gen_);
    const double u2 = uniform_open01(gen_);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  SplitMix64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pillai
