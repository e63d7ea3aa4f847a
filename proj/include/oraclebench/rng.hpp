#pragma once

#include <cstdint>
#include <random>

namespace oraclebench {

using Engine = std::mt19937_64;

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream seed for one task; depends only on its coordinates, never on
/// scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t n,
                                    std::uint64_t replication) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ tag);
  h = mix64(h ^ n);
  return mix64(h ^ replication);
}

inline Engine make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

}  // namespace oraclebench
