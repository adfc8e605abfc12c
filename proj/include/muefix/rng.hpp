// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace muefix::rng {

// SplitMix64 finalizer (Stafford mix13). Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Counter-based draw: the value of stream `key` at position `counter`.
// Equivalent to a SplitMix64 sequence with arbitrary jump-ahead, so any
// (key, counter) pair can be evaluated independently of order or thread.
inline std::uint64_t at(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + (counter + 1) * kGolden);
}

// Child key for substream `index`. The salt keeps derive() values disjoint
// from at() values of the same key.
inline std::uint64_t derive(std::uint64_t key, std::uint64_t index) noexcept {
  return mix64((key ^ 0xD1B54A32D192ED03ull) + (index + 1) * kGolden);
}

// Uniform double in (0,1); never returns an exact 0 or 1. 52-bit resolution
// keeps the top value at 1 - 2^-53, which is exactly representable.
inline double unit_from_bits(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 12) * 0x1.0p-52 + 0x1.0p-53;
}

// Standard normal from two 64-bit draws (Box-Muller, cosine branch).
double gaussian_from_bits(std::uint64_t a, std::uint64_t b) noexcept;

// Sequential view of a counter-based stream, for consumers that just need
// "the next draw" (noise vectors, data bits, symbol picks).
class Stream {
 public:
  explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept { return at(key_, counter_++); }
  double next_unit() noexcept { return unit_from_bits(next_u64()); }
  double next_gaussian() noexcept {
    const std::uint64_t a = next_u64();
    const std::uint64_t b = next_u64();
    return gaussian_from_bits(a, b);
  }
  // +1 or -1 with equal probability.
  int next_sign() noexcept { return (next_u64() >> 63) ? -1 : +1; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace muefix::rng
