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

#include "ldpmatch/bloom.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>

#include "ldpmatch/errors.hpp"

namespace ldpm {
namespace {

constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
// Two independent FNV-1a streams; the second basis is the first with its
// 32-bit halves swapped.
constexpr std::uint64_t kFnvBasis1 = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvBasis2 = 0x84222325cbf29ce4ULL;

std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

void check_geometry(std::uint32_t m, std::uint16_t k) {
  if (m < 2) throw InvalidInputError("filter length m must be at least 2");
  if (k < 1) throw InvalidInputError("hash count k must be at least 1");
}

constexpr std::size_t kHeaderSize = 21;  // magic..epsilon, before the bit array

double read_f64_le(const std::uint8_t* p) {
  std::uint64_t u = 0;
  for (int i = 7; i >= 0; --i) u = (u << 8) | p[i];
  double d;
  std::memcpy(&d, &u, sizeof d);
  return d;
}

}  // namespace

std::string KeywordSet::normalize(std::string_view raw) {
  std::size_t begin = 0;
  std::size_t end = raw.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i]))));
  }
  return out;
}

bool KeywordSet::add(std::string_view raw) {
  std::string token = normalize(raw);
  if (token.empty()) {
    throw InvalidInputError("keyword normalizes to the empty string");
  }
  return tokens_.insert(std::move(token)).second;
}

std::vector<std::uint32_t> hash_positions(std::string_view keyword, std::uint32_t m,
                                          std::uint16_t k) {
  check_geometry(m, k);
  if (keyword.empty()) throw InvalidInputError("cannot hash an empty keyword");
  const std::uint64_t h1 = fnv1a64(keyword, kFnvBasis1);
  const std::uint64_t h2 = fnv1a64(keyword, kFnvBasis2) | 1ULL;  // odd step
  std::vector<std::uint32_t> out;
  out.reserve(k);
  std::uint64_t pos = h1;
  for (std::uint16_t i = 0; i < k; ++i) {
    out.push_back(static_cast<std::uint32_t>(pos % m));
    pos += h2;
  }
  return out;
}

BloomProfile::BloomProfile(std::uint32_t m, std::uint16_t k, ProfileRole role)
    : m_(m), k_(k), role_(role) {
  check_geometry(m, k);
  words_.assign((m + 63u) / 64u, 0);
}

BloomProfile BloomProfile::from_keywords(const KeywordSet& keywords, std::uint32_t m,
                                         std::uint16_t k, ProfileRole role) {
  BloomProfile profile(m, k, role);
  for (const std::string& token : keywords) profile.insert(token);
  return profile;
}

BloomProfile BloomProfile::from_bits(const std::vector<bool>& bits, std::uint16_t k,
                                     ProfileRole role) {
  if (bits.size() < 2 || bits.size() > 0xFFFFFFFFull) {
    throw InvalidInputError("bit pattern length out of range");
  }
  BloomProfile profile(static_cast<std::uint32_t>(bits.size()), k, role);
  for (std::uint32_t i = 0; i < profile.m_; ++i) {
    if (bits[i]) profile.set_bit(i);
  }
  return profile;
}

void BloomProfile::set_bit(std::uint32_t index) {
  words_[index >> 6] |= 1ULL << (index & 63u);
}

bool BloomProfile::bit(std::uint32_t index) const {
  if (index >= m_) throw InvalidInputError("bit index out of range");
  return (words_[index >> 6] >> (index & 63u)) & 1u;
}

void BloomProfile::insert(std::string_view keyword) {
  if (perturbed_) throw StateError("cannot insert into a perturbed profile");
  for (std::uint32_t pos : hash_positions(keyword, m_, k_)) set_bit(pos);
}

bool BloomProfile::contains(std::string_view keyword) const {
  if (perturbed_) throw StateError("membership is undefined on a perturbed profile");
  for (std::uint32_t pos : hash_positions(keyword, m_, k_)) {
    if (!bit(pos)) return false;
  }
  return true;
}

std::uint32_t BloomProfile::ones_count() const {
  std::uint32_t ones = 0;
  for (std::uint64_t w : words_) ones += static_cast<std::uint32_t>(std::popcount(w));
  return ones;
}

std::vector<std::uint8_t> BloomProfile::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + (m_ + 7u) / 8u);
  for (char c : {'L', 'D', 'P', 'M'}) out.push_back(static_cast<std::uint8_t>(c));
  out.push_back(1);  // version
  out.push_back(static_cast<std::uint8_t>(role_));
  out.push_back(perturbed_ ? 1 : 0);
  out.push_back(static_cast<std::uint8_t>(k_ & 0xFF));
  out.push_back(static_cast<std::uint8_t>(k_ >> 8));
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((m_ >> shift) & 0xFF));
  }
  std::uint64_t eps_bits = 0;
  if (perturbed_) {
    double eps = *epsilon_;
    std::memcpy(&eps_bits, &eps, sizeof eps_bits);
  }
  for (int shift = 0; shift < 64; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((eps_bits >> shift) & 0xFF));
  }
  const std::uint32_t byte_count = (m_ + 7u) / 8u;
  for (std::uint32_t i = 0; i < byte_count; ++i) {
    const std::uint32_t word = i >> 3;
    const std::uint32_t shift = (i & 7u) * 8u;
    out.push_back(static_cast<std::uint8_t>((words_[word] >> shift) & 0xFF));
  }
  return out;
}

BloomProfile BloomProfile::deserialize(std::span<const std::uint8_t> bytes) {
  auto fail = [](std::size_t offset, const std::string& what) {
    throw ParseError("profile byte " + std::to_string(offset) + ": " + what);
  };
  if (bytes.size() < kHeaderSize) {
    fail(bytes.size(), "truncated header (need " + std::to_string(kHeaderSize) + " bytes)");
  }
  if (std::memcmp(bytes.data(), "LDPM", 4) != 0) fail(0, "bad magic");
  if (bytes[4] != 1) fail(4, "unsupported version " + std::to_string(bytes[4]));
  if (bytes[5] > 1) fail(5, "bad role " + std::to_string(bytes[5]));
  if (bytes[6] > 1) fail(6, "bad perturbed flag " + std::to_string(bytes[6]));
  const auto role = static_cast<ProfileRole>(bytes[5]);
  const bool perturbed = bytes[6] == 1;
  const std::uint16_t k = static_cast<std::uint16_t>(bytes[7] | (bytes[8] << 8));
  std::uint32_t m = 0;
  for (int i = 3; i >= 0; --i) m = (m << 8) | bytes[9 + i];
  if (m < 2) fail(9, "filter length m must be at least 2");
  if (k < 1) fail(7, "hash count k must be at least 1");
  const double epsilon = read_f64_le(bytes.data() + 13);
  if (perturbed) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail(13, "bad epsilon");
  } else if (epsilon != 0.0) {
    fail(13, "epsilon must be zero for an unperturbed profile");
  }
  const std::size_t byte_count = (m + 7u) / 8u;
  if (bytes.size() != kHeaderSize + byte_count) {
    fail(bytes.size(), "expected " + std::to_string(kHeaderSize + byte_count) + " bytes total");
  }
  BloomProfile profile(m, k, role);
  for (std::size_t i = 0; i < byte_count; ++i) {
    const std::uint8_t b = bytes[kHeaderSize + i];
    const std::uint32_t word = static_cast<std::uint32_t>(i) >> 3;
    const std::uint32_t shift = (static_cast<std::uint32_t>(i) & 7u) * 8u;
    profile.words_[word] |= static_cast<std::uint64_t>(b) << shift;
  }
  // Unused high bits past m must be zero so equal filters compare equal
  // bytewise.
  if (m % 64u != 0) {
    const std::uint64_t mask = ~0ULL << (m % 64u);
    if (profile.words_.back() & mask) {
      fail(kHeaderSize + byte_count - 1, "nonzero padding bits past filter end");
    }
  }
  profile.perturbed_ = perturbed;
  if (perturbed) profile.epsilon_ = epsilon;
  return profile;
}

}  // namespace ldpm
