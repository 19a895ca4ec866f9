#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sts {

// splitmix64; used to derive labeled sub-seeds from one master seed so that
// every randomized component is reproducible from a single 64-bit value.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  std::uint64_t h = mix64(master);
  for (char c : label) h = mix64(h ^ static_cast<unsigned char>(c));
  return mix64(h ^ index);
}

using Rng = std::mt19937_64;

}  // namespace sts
