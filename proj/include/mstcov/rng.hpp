#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mstcov {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

/// Seed for the substream identified by a path of indices below `seed`,
/// e.g. derive_seed(seed, {cell, replicate}). Distinct paths give
/// statistically independent streams; the mapping is fixed across builds.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = mix64(seed);
  for (std::uint64_t step : path) state = mix64(state ^ mix64(step + 0x632be59bd9b4e019ULL));
  return state;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(seed, path));
}

} // namespace mstcov
