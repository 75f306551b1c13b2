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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ldpmatch/bloom.hpp"
#include "ldpmatch/errors.hpp"
#include "ldpmatch/ldp.hpp"
#include "ldpmatch/rng.hpp"

using namespace ldpm;

namespace {

const double kLn3 = std::log(3.0);

BloomProfile profile_with_ones(std::uint32_t m, std::uint32_t ones, std::uint16_t k,
                               ProfileRole role = ProfileRole::Candidate) {
  std::vector<bool> bits(m, false);
  for (std::uint32_t i = 0; i < ones; ++i) bits[i] = true;
  return BloomProfile::from_bits(bits, k, role);
}

}  // namespace

TEST_CASE("flip probability reference values") {
  // epsilon = ln 3, k = 1: p = 1/(1+3) = 1/4 is exact in binary64.
  CHECK(flip_probability(kLn3, 1) == 0.25);

  // epsilon = ln 3, k = 2: p = 1/(1+sqrt(3)).
  CHECK(std::abs(flip_probability(kLn3, 2) - 0.36602540378443865) <= 1e-12);

  // Frozen from an independent evaluation of 1/(1+e^(eps/k)).
  CHECK(flip_probability(10.0, 1) == doctest::Approx(4.5397868702434395e-05).epsilon(1e-12));
  CHECK(flip_probability(50.0, 1) == doctest::Approx(1.928749847963918e-22).epsilon(1e-12));
  CHECK(std::abs(flip_probability(std::log(2.0), 1) - 1.0 / 3.0) <= 1e-15);
}

TEST_CASE("flip probability stays below one half") {
  for (double epsilon : {1e-9, 0.1, 0.5, 1.0, kLn3, 4.0, 10.0, 50.0}) {
    for (std::uint16_t k : {1, 2, 4, 8}) {
      const double p = flip_probability(epsilon, k);
      CHECK(p > 0.0);
      CHECK(p < 0.5);
    }
  }
}

TEST_CASE("flip probability input validation") {
  CHECK_THROWS_AS(flip_probability(0.0, 1), InvalidInputError);
  CHECK_THROWS_AS(flip_probability(-1.0, 1), InvalidInputError);
  CHECK_THROWS_AS(flip_probability(std::numeric_limits<double>::quiet_NaN(), 1),
                  InvalidInputError);
  CHECK_THROWS_AS(flip_probability(std::numeric_limits<double>::infinity(), 1),
                  InvalidInputError);
  CHECK_THROWS_AS(flip_probability(1.0, 0), InvalidInputError);
}

TEST_CASE("privacy params carry the derived p") {
  const auto params = PrivacyParams::create(kLn3, 1);
  CHECK(params.epsilon == kLn3);
  CHECK(params.k == 1);
  CHECK(params.p == 0.25);
  CHECK_THROWS_AS(PrivacyParams::create(-2.0, 1), InvalidInputError);
  CHECK_THROWS_AS(PrivacyParams::create(1.0, 0), InvalidInputError);
}

TEST_CASE("perturbation is deterministic per seed") {
  const auto source = profile_with_ones(256, 40, 1);
  const auto params = PrivacyParams::create(kLn3, 1);
  const auto a = perturb(source, params, Seed{42});
  const auto b = perturb(source, params, Seed{42});
  CHECK(a == b);

  const auto c = perturb(source, params, Seed{43});
  CHECK(a != c);
}

TEST_CASE("perturbation flips exactly the bits the counter stream selects") {
  // Bit i flips iff uniform01(stream(seed, i)) < p, so every bit decision
  // can be audited in isolation without rerunning the whole pass.
  const auto source = profile_with_ones(64, 10, 1);
  const auto params = PrivacyParams::create(kLn3, 1);
  const std::uint64_t seed = 20260822;
  const auto noisy = perturb(source, params, Seed{seed});
  for (std::uint32_t i = 0; i < 64; ++i) {
    const bool flipped = rng::uniform01(rng::stream(seed, i)) < params.p;
    CHECK(noisy.bit(i) == (source.bit(i) != flipped));
  }
}

TEST_CASE("perturbation output state") {
  const auto source = profile_with_ones(128, 30, 2);
  const auto params = PrivacyParams::create(2.0, 2);
  const auto noisy = perturb(source, params, Seed{7});

  CHECK(noisy.perturbed());
  REQUIRE(noisy.epsilon().has_value());
  CHECK(*noisy.epsilon() == 2.0);
  CHECK(noisy.m() == 128);
  CHECK(noisy.k() == 2);
  CHECK(noisy.role() == source.role());

  // The source is untouched.
  CHECK_FALSE(source.perturbed());
  CHECK(source.ones_count() == 30);
}

TEST_CASE("perturbation is one-shot") {
  const auto source = profile_with_ones(64, 5, 1);
  const auto params = PrivacyParams::create(1.0, 1);
  const auto once = perturb(source, params, Seed{1});
  CHECK_THROWS_AS(perturb(once, params, Seed{2}), StateError);
}

TEST_CASE("perturbation rejects mismatched k") {
  const auto source = profile_with_ones(64, 5, 2);
  const auto params = PrivacyParams::create(1.0, 1);
  CHECK_THROWS_AS(perturb(source, params, Seed{1}), InvalidInputError);
}

TEST_CASE("huge epsilon leaves bits unchanged") {
  // p(50, 1) ~ 1.9e-22 is far below the PRNG's 2^-53 resolution, so not a
  // single bit can flip.
  const auto source = profile_with_ones(4096, 100, 1);
  const auto params = PrivacyParams::create(50.0, 1);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto noisy = perturb(source, params, Seed{seed});
    CHECK(noisy.perturbed());
    for (std::uint32_t w = 0; w < source.words().size(); ++w) {
      CHECK(noisy.words()[w] == source.words()[w]);
    }
  }
}

TEST_CASE("expected ones count after randomized response") {
  // m=4096 with 100 ones at p=0.25: E[ones'] = 100*(1-p) + 3996*p = 1074.
  const auto source = profile_with_ones(4096, 100, 1);
  const auto params = PrivacyParams::create(kLn3, 1);

  double mean = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const auto noisy = perturb(source, params, Seed{rng::derive_seed(314, "ones", t)});
    mean += static_cast<double>(noisy.ones_count());
  }
  mean /= trials;
  CHECK(mean == doctest::Approx(1074.0).epsilon(0.01));
}

TEST_CASE("single-bit randomized response ratio approximates e^epsilon") {
  // P[out=1 | in=1] / P[out=1 | in=0] should approach e^eps = 3 at k=1.
  // 10^5 trials here; the acceptance run repeats this at 10^6.
  const auto params = PrivacyParams::create(kLn3, 1);
  const auto one = profile_with_ones(2, 1, 1);  // bit 0 set
  const auto zero_profile =
      BloomProfile::from_bits({false, true}, 1, ProfileRole::Candidate);  // bit 0 clear

  const int trials = 100000;
  int kept = 0;
  int injected = 0;
  for (int t = 0; t < trials; ++t) {
    if (perturb(one, params, Seed{rng::derive_seed(1, "in1", t)}).bit(0)) ++kept;
    if (perturb(zero_profile, params, Seed{rng::derive_seed(1, "in0", t)}).bit(0)) ++injected;
  }
  const double ratio = static_cast<double>(kept) / static_cast<double>(injected);
  CHECK(ratio > 2.8);
  CHECK(ratio < 3.2);
}

TEST_CASE("bit flips are pairwise independent across positions") {
  // 2x2 contingency of flip indicators at two positions over 10^5 trials.
  // With independent flips the chi-square statistic (1 dof) stays small;
  // 9.0 corresponds to a three-sigma deviation.
  const auto source = profile_with_ones(64, 32, 1);
  const auto params = PrivacyParams::create(kLn3, 1);

  const int trials = 100000;
  long n11 = 0, n10 = 0, n01 = 0;
  for (int t = 0; t < trials; ++t) {
    const auto noisy = perturb(source, params, Seed{rng::derive_seed(88, "chi", t)});
    const bool flip_a = noisy.bit(3) != source.bit(3);
    const bool flip_b = noisy.bit(47) != source.bit(47);
    if (flip_a && flip_b) ++n11;
    else if (flip_a) ++n10;
    else if (flip_b) ++n01;
  }
  const long n00 = trials - n11 - n10 - n01;
  const double row1 = static_cast<double>(n11 + n10);
  const double col1 = static_cast<double>(n11 + n01);
  const double n = trials;
  const double e11 = row1 * col1 / n;
  const double e10 = row1 * (n - col1) / n;
  const double e01 = (n - row1) * col1 / n;
  const double e00 = (n - row1) * (n - col1) / n;
  const double chi2 = (n11 - e11) * (n11 - e11) / e11 + (n10 - e10) * (n10 - e10) / e10 +
                      (n01 - e01) * (n01 - e01) / e01 + (n00 - e00) * (n00 - e00) / e00;
  CHECK(chi2 < 9.0);
}
