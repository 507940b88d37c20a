#pragma once

#include <cstdint>
#include <random>

namespace adaptnet {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based stream seed for trial `trial` (optionally a sub-stream
/// `salt`), independent of how trials are scheduled.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial,
                                    std::uint64_t salt = 0) noexcept {
  const std::uint64_t base = splitmix64(seed ^ (trial * 0xD1B54A32D192ED03ULL));
  return salt == 0 ? base : splitmix64(base ^ salt);
}

/// Uniform double in [0, 1) from the top 53 bits; portable across standard
/// libraries, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace adaptnet

namespace adaptnet {

/// Standard normal draw (ziggurat); the number of engine calls per draw does
/// not depend on anything but the engine state.
double standard_normal(Rng& rng);

}  // namespace adaptnet
