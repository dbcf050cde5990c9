#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace zopt {

/// Every trial owns one of these; nothing random is shared between trials.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic stream seed from a base seed and a trial coordinate, e.g.
/// derive_seed(base, {n, r, repetition}).
constexpr std::uint64_t derive_seed(
    std::uint64_t base, std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t h = mix64(base);
  for (std::uint64_t c : coords) h = mix64(h ^ mix64(c));
  return h;
}

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Fair coin from the top bit of one draw.
inline bool fair_coin(Rng& rng) noexcept { return (rng() >> 63) != 0; }

}  // namespace zopt
