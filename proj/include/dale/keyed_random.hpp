#pragma once

#include <cstdint>
#include <string_view>

namespace dale {

// Counter-based draws: every value is a pure function of (seed, stream, index),
// so results do not depend on iteration order or thread schedule.
enum class Stream : std::uint64_t {
  region_level = 1,
  quadtree_split = 2,
  patch_window = 3,
  global_level = 4,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t keyed_bits(std::uint64_t seed, Stream stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream))) + index);
}

// Uniform integer in [0, n) via the high word of a 64x64 product.
constexpr std::uint64_t keyed_below(std::uint64_t seed, Stream stream, std::uint64_t index, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(keyed_bits(seed, stream, index)) * n) >> 64);
}

// Uniform real in [0, 1) with 53 random bits.
constexpr double keyed_unit(std::uint64_t seed, Stream stream, std::uint64_t index) {
  return static_cast<double>(keyed_bits(seed, stream, index) >> 11) * 0x1.0p-53;
}

// FNV-1a, stable across platforms and runs.
constexpr std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace dale
