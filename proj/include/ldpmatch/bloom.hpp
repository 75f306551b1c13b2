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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ldpm {

// A normalized keyword collection: tokens are non-empty, lowercase and
// deduplicated. Iteration order is lexicographic, which keeps everything
// built from a KeywordSet deterministic.
class KeywordSet {
 public:
  KeywordSet() = default;

  // Lowercases ASCII letters and trims surrounding whitespace. Returns the
  // empty string for inputs that normalize to nothing.
  static std::string normalize(std::string_view raw);

  // Adds a keyword after normalization. Throws InvalidInputError when the
  // token normalizes to the empty string. Returns false if already present.
  bool add(std::string_view raw);

  bool contains(std::string_view normalized) const {
    return tokens_.count(std::string(normalized)) > 0;
  }

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }

  bool operator==(const KeywordSet&) const = default;

 private:
  std::set<std::string> tokens_;
};

enum class ProfileRole : std::uint8_t { Job = 0, Candidate = 1 };

// The k bit positions of a keyword in a filter of length m, computed by
// double hashing: pos_i = (h1 + i*h2) mod m, where h1 and h2 are FNV-1a64
// hashes of the keyword bytes under two fixed basis constants and h2 is
// forced odd. With odd h2 all k positions are distinct whenever m is a
// power of two. The constants are part of the wire contract: every party
// must hash identically or similarity scores are meaningless.
std::vector<std::uint32_t> hash_positions(std::string_view keyword, std::uint32_t m,
                                          std::uint16_t k);

// Fixed-length bit array encoding a keyword set. Immutable once perturbed:
// the randomized bits of a perturbed profile must never be interpreted as
// membership data, so insert/contains reject perturbed instances.
class BloomProfile {
 public:
  BloomProfile(std::uint32_t m, std::uint16_t k, ProfileRole role);

  static BloomProfile from_keywords(const KeywordSet& keywords, std::uint32_t m,
                                    std::uint16_t k, ProfileRole role);

  // Builds a profile with an explicit bit pattern (m = bits.size()).
  static BloomProfile from_bits(const std::vector<bool>& bits, std::uint16_t k,
                                ProfileRole role);

  void insert(std::string_view keyword);
  bool contains(std::string_view keyword) const;

  std::uint32_t m() const { return m_; }
  std::uint16_t k() const { return k_; }
  ProfileRole role() const { return role_; }
  bool perturbed() const { return perturbed_; }
  std::optional<double> epsilon() const { return epsilon_; }

  bool bit(std::uint32_t index) const;
  std::uint32_t ones_count() const;
  std::span<const std::uint64_t> words() const { return words_; }

  // Canonical byte layout:
  //   magic "LDPM" | version u8=1 | role u8 | perturbed u8 | k u16 LE |
  //   m u32 LE | epsilon f64 LE (zero bytes when unperturbed) |
  //   bit array packed LSB-first, ceil(m/8) bytes, unused high bits zero.
  std::vector<std::uint8_t> serialize() const;
  static BloomProfile deserialize(std::span<const std::uint8_t> bytes);

  bool operator==(const BloomProfile&) const = default;

 private:
  friend BloomProfile apply_randomized_response(const BloomProfile&, double, double,
                                                std::uint64_t);

  void set_bit(std::uint32_t index);

  std::uint32_t m_;
  std::uint16_t k_;
  ProfileRole role_;
  bool perturbed_ = false;
  std::optional<double> epsilon_;
  std::vector<std::uint64_t> words_;
};

}  // namespace ldpm
