#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sdca {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds a sequence of keys into a seed. Distinct key tuples give
/// statistically independent streams.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(base);
  for (auto k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// Named sub-streams of a scenario seed.
enum class Stream : std::uint64_t { sources = 1, noise = 2, phases = 3, doas = 4 };

inline std::mt19937_64 make_engine(std::uint64_t seed, Stream stream) {
  return std::mt19937_64(derive_seed(seed, {static_cast<std::uint64_t>(stream)}));
}

}  // namespace sdca
