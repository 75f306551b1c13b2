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
#include "ldpmatch/ldp.hpp"

namespace ldpm {

// Cosine estimate. `raw` is the unclamped value: it can leave [0, 1] when
// computed from a noisy filter. `value` is raw clamped to [0, 1] and is what
// ranking uses.
struct SimilarityScore {
  double raw = 0.0;
  double value = 0.0;

  static SimilarityScore from_raw(double raw);
};

// Which ones-count feeds the scalar-product correction. JobOnes matches the
// expectation of the observed product (unbiased, the default everywhere);
// PerturbedCandidateOnes uses the noisy filter's own count and is kept for
// comparison because its bias is measurable. See the estimator notes in the
// README.
enum class CorrectionVariant : std::uint8_t { PerturbedCandidateOnes = 0, JobOnes = 1 };

// Number of positions where both filters have a 1.
std::uint32_t scalar_product(const BloomProfile& a, const BloomProfile& b);

// Plain cosine over the bit vectors: scalar_product / sqrt(ones(a) * ones(b)).
// Throws UndefinedSimilarityError when either filter is all-zero.
SimilarityScore cosine(const BloomProfile& a, const BloomProfile& b);

// De-noises an observed scalar product: (sp_tilde - p * correction_ones) /
// (1 - 2p). With p = 0 this is the identity.
double corrected_scalar_product(double sp_tilde, double correction_ones, double p);

// Inverts the expected ones count of a bit-flipped filter to recover the
// original count: (perturbed_ones - p*m) / (1 - 2p), clamped to [1, m] so a
// downstream square root is always usable.
double estimate_true_ones(std::uint32_t perturbed_ones, double p, std::uint32_t m);

// Cosine between an unperturbed job filter and a perturbed candidate filter,
// with both the numerator and the candidate norm corrected for the flip
// probability in params. params must agree with the candidate filter's
// recorded k and epsilon.
SimilarityScore private_cosine(const BloomProfile& job, const BloomProfile& candidate_perturbed,
                               const PrivacyParams& params, CorrectionVariant variant);

}  // namespace ldpm
