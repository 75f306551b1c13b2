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

#include "ldpmatch/bloom.hpp"

namespace ldpm {

// Seed for one perturbation. Wrapped so call sites cannot silently swap a
// seed with some other integer argument.
struct Seed {
  std::uint64_t value = 0;
};

// Per-bit flip probability for randomized response at privacy budget
// epsilon spread over k hash functions: p = 1 / (1 + e^(epsilon/k)).
// Always in (0, 0.5) for positive epsilon.
double flip_probability(double epsilon, std::uint16_t k);

struct PrivacyParams {
  double epsilon = 0.0;
  std::uint16_t k = 0;
  double p = 0.0;

  // Validates epsilon > 0 (finite) and k >= 1, then derives p.
  static PrivacyParams create(double epsilon, std::uint16_t k);
};

// Randomized response over every bit: each bit of `source` is flipped
// independently with probability params.p, decided by a counter-mode PRNG
// over (seed, bit index), so the same inputs always produce the same output
// and any bit can be audited in isolation. The source must be unperturbed
// and its k must match params.k; the result is marked perturbed, carries
// epsilon, and rejects further perturbation or membership queries.
BloomProfile perturb(const BloomProfile& source, const PrivacyParams& params, Seed seed);

// Internal hook used by perturb; declared here so it can be befriended by
// BloomProfile without leaking params/seed types into bloom.hpp.
BloomProfile apply_randomized_response(const BloomProfile& source, double epsilon,
                                       double flip_probability, std::uint64_t seed);

}  // namespace ldpm
