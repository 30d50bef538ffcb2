// Copyright 2026 The krrtext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KRRTEXT_RNG_HPP_
#define KRRTEXT_RNG_HPP_

#include <concepts>
#include <cstdint>
#include <string_view>

namespace krrtext {

// 64-bit FNV-1a, used to fold document ids into stream seeds.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (char c : data) {
    hash ^= static_cast<std::uint8_t>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

// SplitMix64 (Steele, Lea, Flood 2014). Fully specified, so results are
// identical across platforms. Used for seeding and substream derivation.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256** 1.0 (Blackman, Vigna). Portable and seedable; the draw
// primitives below avoid std::uniform_*_distribution, whose output is
// implementation-defined.
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 mix(seed);
    for (auto& word : state_) word = mix.next();
    // xoshiro state must not be all zero; SplitMix64 cannot emit four
    // consecutive zeros, so no further check is needed.
  }

  // Substream for one document: the state is seeded from
  // SplitMix64(seed XOR fnv1a64(stream_id)). Streams with distinct ids are
  // independent for any fixed corpus-level seed.
  static Xoshiro256StarStar for_stream(std::uint64_t seed,
                                       std::string_view stream_id) {
    return Xoshiro256StarStar(seed ^ fnv1a64(stream_id));
  }

  std::uint64_t next_u64() {
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

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Unbiased integer in [0, n) by masked rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t value = next_u64() & mask;
    while (value >= n) value = next_u64() & mask;
    return value;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

// Anything usable as a randomness source by the mechanism. Tests inject
// scripted streams through this concept to pin down branch behavior.
template <typename R>
concept RandomStream = requires(R r, double p, std::uint64_t n) {
  { r.bernoulli(p) } -> std::convertible_to<bool>;
  { r.uniform_below(n) } -> std::convertible_to<std::uint64_t>;
};

static_assert(RandomStream<Xoshiro256StarStar>);

}  // namespace krrtext

#endif  // KRRTEXT_RNG_HPP_
