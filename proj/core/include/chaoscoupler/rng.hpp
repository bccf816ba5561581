#pragma once

#include <cstdint>

namespace chaoscoupler::rng {

/// splitmix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based draw: the value depends only on (seed, stream, index), so
/// samples are identical regardless of thread count or evaluation order.
constexpr std::uint64_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return mix(mix(mix(seed) ^ stream) ^ index);
}

/// Uniform on [0, 1) with 53 random bits.
constexpr double unit(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return static_cast<double>(draw(seed, stream, index) >> 11) * 0x1.0p-53;
}

/// Uniform on [-1, 1).
constexpr double symmetric(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return 2.0 * unit(seed, stream, index) - 1.0;
}

}  // namespace chaoscoupler::rng
