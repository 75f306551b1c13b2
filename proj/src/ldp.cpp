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

#include "ldpmatch/ldp.hpp"

#include <cmath>

#include "ldpmatch/errors.hpp"
#include "ldpmatch/rng.hpp"

namespace ldpm {

double flip_probability(double epsilon, std::uint16_t k) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInputError("epsilon must be positive and finite");
  }
  if (k < 1) throw InvalidInputError("hash count k must be at least 1");
  return 1.0 / (1.0 + std::exp(epsilon / static_cast<double>(k)));
}

PrivacyParams PrivacyParams::create(double epsilon, std::uint16_t k) {
  PrivacyParams params;
  params.p = flip_probability(epsilon, k);  // validates epsilon and k
  params.epsilon = epsilon;
  params.k = k;
  return params;
}

BloomProfile apply_randomized_response(const BloomProfile& source, double epsilon,
                                       double flip_probability, std::uint64_t seed) {
  BloomProfile out = source;
  for (std::uint32_t i = 0; i < out.m_; ++i) {
    if (rng::uniform01(rng::stream(seed, i)) < flip_probability) {
      out.words_[i >> 6] ^= 1ULL << (i & 63u);
    }
  }
  out.perturbed_ = true;
  out.epsilon_ = epsilon;
  return out;
}

BloomProfile perturb(const BloomProfile& source, const PrivacyParams& params, Seed seed) {
  if (source.perturbed()) {
    throw StateError("profile is already perturbed; noise must be applied exactly once");
  }
  if (params.k != source.k()) {
    throw InvalidInputError("privacy params k does not match the profile's k");
  }
  const double p = flip_probability(params.epsilon, params.k);  // re-validate
  return apply_randomized_response(source, params.epsilon, p, seed.value);
}

}  // namespace ldpm
