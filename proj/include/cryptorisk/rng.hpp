// Copyright 2026 The cryptorisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace cryptorisk::rng {

/// xoshiro256** seeded through splitmix64. Cheap to construct, so every
/// scenario or path gets its own engine and results do not depend on how
/// the work is split across threads.
class Engine {
 public:
  using result_type = std::uint64_t;

  explicit Engine(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Stable 64-bit FNV-1a hash, used to turn stream names into keys.
std::uint64_t hash_name(std::string_view name) noexcept;

/// Derives a child seed; distinct (seed, key) pairs give unrelated streams.
std::uint64_t derive(std::uint64_t seed, std::uint64_t key) noexcept;

template <class... Keys>
std::uint64_t derive(std::uint64_t seed, std::uint64_t key, Keys... rest) noexcept {
  return derive(derive(seed, key), static_cast<std::uint64_t>(rest)...);
}

inline Engine substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return Engine(derive(seed, index));
}

}  // namespace cryptorisk::rng
