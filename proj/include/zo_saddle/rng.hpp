#pragma once

// Random stream derivation. Every random quantity in the library is drawn
// from a stream identified by (root seed, purpose tag, index), so results
// depend only on that triple and never on scheduling.

#include <cstdint>
#include <random>
#include <string_view>

namespace zo_saddle {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of the stream (root, tag, index).
constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                    std::uint64_t index) noexcept {
  return splitmix64(splitmix64(root ^ fnv1a64(tag)) + index);
}

inline Rng make_stream(std::uint64_t root, std::string_view tag,
                       std::uint64_t index = 0) {
  return Rng{derive_seed(root, tag, index)};
}

}  // namespace zo_saddle
