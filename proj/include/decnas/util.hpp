#pragma once

#include <cstdint>
#include <random>

namespace decnas {

// splitmix64 finalizer; used to derive independent sub-seeds from the run
// seed plus context tags (iteration, round, candidate, client, ...).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t seed_combine(std::uint64_t seed) { return mix64(seed); }

template <typename... Rest>
std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t head, Rest... rest) {
  return seed_combine(mix64(seed ^ mix64(head)), rest...);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(mix64(seed));
}

}  // namespace decnas
