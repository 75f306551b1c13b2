// Copyright 2026 the ldpmatch authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string_view>

namespace ldpm::rng {

// SplitMix64 finalizer. All randomness in the project is built from this one
// integer permutation so runs are bit-reproducible across platforms; the
// standard <random> distributions are avoided because their output is not
// specified portably.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Counter-based stream: output i of the stream keyed by `seed`. Pure function
// of (seed, index), so consumers may evaluate positions in any order or in
// parallel and still agree bit for bit.
constexpr std::uint64_t stream(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed + index * 0x9E3779B97F4A7C15ULL);
}

// Uniform double in [0, 1) from 64 random bits (53-bit mantissa path).
constexpr double uniform01(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

namespace detail {

constexpr std::uint64_t fold(std::uint64_t acc, std::uint64_t part) noexcept {
  return mix64(acc ^ mix64(part));
}

constexpr std::uint64_t fold(std::uint64_t acc, std::string_view part) noexcept {
  // FNV-1a 64 over the bytes, then folded like an integer part.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : part) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return fold(acc, h);
}

}  // namespace detail

// Derives a child seed from a base seed and a list of mixed-type components
// (integers and strings). Used to key independent random streams: per-cell
// experiment seeds, per-profile perturbation seeds, per-round simulator draws.
template <typename... Parts>
constexpr std::uint64_t derive_seed(std::uint64_t base, Parts&&... parts) noexcept {
  std::uint64_t acc = mix64(base);
  ((acc = detail::fold(acc, parts)), ...);
  return acc;
}

// Small sequential generator for code that wants a stateful draw sequence
// (corpus synthesis, simulator choices). Deterministic and portable.
class SplitMix {
 public:
  explicit constexpr SplitMix(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  // Uniform integer in [0, n). Modulo bias is irrelevant at the sizes used
  // here; what matters is that the mapping is fixed forever.
  constexpr std::uint64_t below(std::uint64_t n) noexcept { return next() % n; }

  constexpr double next01() noexcept { return uniform01(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace ldpm::rng
