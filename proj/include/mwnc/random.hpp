#pragma once

#include <cstdint>

namespace mwnc {

/// Stateless hashing used for every random draw in the simulator.
///
/// Each draw is a pure function of (key, stream, counter), so any slot of any
/// receiver can be regenerated without replaying earlier slots.
namespace rng {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash(std::uint64_t key, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t h = mix64(key ^ 0x6A09E667F3BCC909ULL);
  h = mix64(h ^ stream);
  h = mix64(h ^ counter);
  return h;
}

constexpr std::uint64_t hash(std::uint64_t key, std::uint64_t stream, std::uint64_t counter,
                             std::uint64_t sub) {
  return mix64(hash(key, stream, counter) ^ sub);
}

/// Maps a 64-bit hash onto [0, bound) by multiply-high.
inline std::uint64_t below(std::uint64_t h, std::uint64_t bound) {
  __extension__ using wide = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<wide>(h) * bound) >> 64);
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// Stream identifiers keep the different consumers of one seed apart.
inline constexpr std::uint64_t kInjectionStream = 0xA11C0DE5ULL;
inline constexpr std::uint64_t kPayloadStream = 0xBA5E0000ULL;
inline constexpr std::uint64_t kCoefficientStream = 0xC0EFF000ULL;
inline constexpr std::uint64_t kChannelStreamBase = 0xC4A00000ULL;

}  // namespace rng
}  // namespace mwnc
