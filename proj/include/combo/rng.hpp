#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace combo {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value) noexcept {
  return mix64(seed ^ mix64(value));
}

/// FNV-1a, stable across platforms (std::hash is not).
constexpr std::uint64_t hash_string(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for the design decision taken after `cohorts` cohorts; the same
/// history always reproduces the same randomized recommendation.
constexpr std::uint64_t decision_seed(std::uint64_t trial_seed, std::size_t cohorts) noexcept {
  return combine_seed(trial_seed ^ 0x6465636973696f6eULL, cohorts);
}

constexpr std::uint64_t selection_seed(std::uint64_t trial_seed) noexcept {
  return combine_seed(trial_seed ^ 0x73656c656374ULL, 0);
}

/// Uniform draw in [0,1) using the top 53 bits; avoids the
/// implementation-defined std::uniform_real_distribution.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) noexcept {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

}  // namespace combo
