#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace imgplag {

// 64-bit FNV-1a. Stable across platforms; used for content hashes and for
// keying the fallback embedding generator.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

// SplitMix64 finalizer (Steele, Lea, Flood). Constants:
//   increment 0x9e3779b97f4a7c15, multipliers 0xbf58476d1ce4e5b9 and
//   0x94d049bb133111eb, shifts 30/27/31.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateful SplitMix64 stream.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }

  // Uniform double in [0, 1) from the top 53 bits.
  constexpr double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

std::string to_hex(std::uint64_t value);

}  // namespace imgplag
