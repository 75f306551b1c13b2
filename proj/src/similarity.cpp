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

#include "ldpmatch/similarity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ldpmatch/errors.hpp"

namespace ldpm {
namespace {

void check_same_length(const BloomProfile& a, const BloomProfile& b) {
  if (a.m() != b.m()) {
    throw DimensionError("filter lengths differ: " + std::to_string(a.m()) + " vs " +
                         std::to_string(b.m()));
  }
}

void check_flip_probability(double p) {
  if (!(p >= 0.0) || p >= 0.5) {
    throw InvalidInputError("flip probability must lie in [0, 0.5)");
  }
}

}  // namespace

SimilarityScore SimilarityScore::from_raw(double raw) {
  SimilarityScore s;
  s.raw = raw;
  s.value = std::min(1.0, std::max(0.0, raw));
  return s;
}

std::uint32_t scalar_product(const BloomProfile& a, const BloomProfile& b) {
  check_same_length(a, b);
  const auto wa = a.words();
  const auto wb = b.words();
  std::uint32_t total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    total += static_cast<std::uint32_t>(std::popcount(wa[i] & wb[i]));
  }
  return total;
}

SimilarityScore cosine(const BloomProfile& a, const BloomProfile& b) {
  const std::uint32_t dot = scalar_product(a, b);  // also checks lengths
  const std::uint32_t ones_a = a.ones_count();
  const std::uint32_t ones_b = b.ones_count();
  if (ones_a == 0 || ones_b == 0) {
    throw UndefinedSimilarityError("cosine of an all-zero filter is undefined");
  }
  // sqrt of the product, not a product of sqrts: for identical filters the
  // radicand is a perfect square, so the result is exactly 1.
  return SimilarityScore::from_raw(
      static_cast<double>(dot) /
      std::sqrt(static_cast<double>(ones_a) * static_cast<double>(ones_b)));
}

double corrected_scalar_product(double sp_tilde, double correction_ones, double p) {
  check_flip_probability(p);
  return (sp_tilde - p * correction_ones) / (1.0 - 2.0 * p);
}

double estimate_true_ones(std::uint32_t perturbed_ones, double p, std::uint32_t m) {
  check_flip_probability(p);
  if (perturbed_ones > m) {
    throw InvalidInputError("perturbed ones count exceeds filter length");
  }
  const double est =
      (static_cast<double>(perturbed_ones) - p * static_cast<double>(m)) / (1.0 - 2.0 * p);
  return std::clamp(est, 1.0, static_cast<double>(m));
}

SimilarityScore private_cosine(const BloomProfile& job, const BloomProfile& candidate_perturbed,
                               const PrivacyParams& params, CorrectionVariant variant) {
  if (job.perturbed()) {
    throw StateError("job filter must be unperturbed");
  }
  if (!candidate_perturbed.perturbed()) {
    throw StateError("candidate filter must be perturbed");
  }
  check_same_length(job, candidate_perturbed);
  if (params.k != candidate_perturbed.k()) {
    throw InvalidInputError("privacy params k does not match the candidate filter");
  }
  if (candidate_perturbed.epsilon()) {
    const double recorded = *candidate_perturbed.epsilon();
    if (std::abs(recorded - params.epsilon) > 1e-9 * std::max(1.0, std::abs(recorded))) {
      throw InvalidInputError("privacy params epsilon does not match the candidate filter");
    }
  }
  const double p = flip_probability(params.epsilon, params.k);
  const std::uint32_t job_ones = job.ones_count();
  if (job_ones == 0) {
    throw UndefinedSimilarityError("cosine of an all-zero job filter is undefined");
  }
  const std::uint32_t reported_ones = candidate_perturbed.ones_count();
  const double correction_ones = variant == CorrectionVariant::JobOnes
                                     ? static_cast<double>(job_ones)
                                     : static_cast<double>(reported_ones);
  const double corrected =
      corrected_scalar_product(scalar_product(job, candidate_perturbed), correction_ones, p);
  const double denom = std::sqrt(static_cast<double>(job_ones) *
                                 estimate_true_ones(reported_ones, p, candidate_perturbed.m()));
  return SimilarityScore::from_raw(corrected / denom);
}

}  // namespace ldpm
