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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ldpmatch/bloom.hpp"
#include "ldpmatch/errors.hpp"
#include "ldpmatch/ldp.hpp"
#include "ldpmatch/recommend.hpp"
#include "ldpmatch/rng.hpp"
#include "ldpmatch/similarity.hpp"

using namespace ldpm;

namespace {

BloomProfile bits_profile(const std::vector<bool>& bits, ProfileRole role, std::uint16_t k = 1) {
  return BloomProfile::from_bits(bits, k, role);
}

// Cosine recomputed from scratch over the raw bits, without going through
// the similarity module, so ranking tests have an independent reference.
double oracle_cosine(const BloomProfile& a, const BloomProfile& b) {
  std::uint32_t dot = 0;
  std::uint32_t ones_a = 0;
  std::uint32_t ones_b = 0;
  for (std::uint32_t i = 0; i < a.m(); ++i) {
    const bool bit_a = a.bit(i);
    const bool bit_b = b.bit(i);
    if (bit_a) ++ones_a;
    if (bit_b) ++ones_b;
    if (bit_a && bit_b) ++dot;
  }
  if (ones_a == 0 || ones_b == 0) return 0.0;
  return static_cast<double>(dot) /
         std::sqrt(static_cast<double>(ones_a) * static_cast<double>(ones_b));
}

std::string random_word(rng::SplitMix& gen) {
  const std::size_t len = 2 + gen.below(8);
  std::string word;
  for (std::size_t i = 0; i < len; ++i) {
    word.push_back(static_cast<char>('a' + gen.below(26)));
  }
  return word;
}

BloomProfile random_keyword_profile(rng::SplitMix& gen, std::uint32_t m, std::uint16_t k,
                                    ProfileRole role) {
  KeywordSet keywords;
  const std::size_t count = 1 + gen.below(6);
  while (keywords.size() < count) keywords.add(random_word(gen));
  return BloomProfile::from_keywords(keywords, m, k, role);
}

}  // namespace

TEST_CASE("job ranking orders by cosine with id tie-break") {
  const auto candidate = bits_profile({true, true, true, false}, ProfileRole::Candidate);
  std::vector<std::pair<std::string, BloomProfile>> jobs = {
      {"j-weak", bits_profile({true, false, false, true}, ProfileRole::Job)},
      {"j-exact", bits_profile({true, true, true, false}, ProfileRole::Job)},
      {"j-mid", bits_profile({true, true, false, false}, ProfileRole::Job)},
  };

  const auto ranked = rank_jobs_for_candidate(candidate, jobs, 10);
  REQUIRE(ranked.entries.size() == 3);
  CHECK(ranked.entries[0].id == "j-exact");
  CHECK(ranked.entries[0].score.value == 1.0);
  CHECK(ranked.entries[1].id == "j-mid");
  CHECK(ranked.entries[2].id == "j-weak");
  for (std::size_t i = 1; i < ranked.entries.size(); ++i) {
    CHECK(ranked.entries[i - 1].score.value >= ranked.entries[i].score.value);
  }
}

TEST_CASE("job ranking tie-break is ascending id") {
  const auto candidate = bits_profile({true, true, false, false}, ProfileRole::Candidate);
  const auto same = bits_profile({true, true, false, false}, ProfileRole::Job);
  std::vector<std::pair<std::string, BloomProfile>> jobs = {
      {"zeta", same}, {"alpha", same}, {"mid", same}};
  const auto ranked = rank_jobs_for_candidate(candidate, jobs, 10);
  REQUIRE(ranked.entries.size() == 3);
  CHECK(ranked.entries[0].id == "alpha");
  CHECK(ranked.entries[1].id == "mid");
  CHECK(ranked.entries[2].id == "zeta");
}

TEST_CASE("job ranking truncates to n and keeps prefix stable") {
  rng::SplitMix gen(404);
  const auto candidate = random_keyword_profile(gen, 64, 2, ProfileRole::Candidate);
  std::vector<std::pair<std::string, BloomProfile>> jobs;
  for (int i = 0; i < 12; ++i) {
    jobs.push_back({"job-" + std::to_string(i),
                    random_keyword_profile(gen, 64, 2, ProfileRole::Job)});
  }

  const auto top3 = rank_jobs_for_candidate(candidate, jobs, 3);
  const auto top8 = rank_jobs_for_candidate(candidate, jobs, 8);
  REQUIRE(top3.entries.size() == 3);
  REQUIRE(top8.entries.size() == 8);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(top3.entries[i].id == top8.entries[i].id);
  }
}

TEST_CASE("job ranking threshold is strict") {
  const auto candidate = bits_profile({true, true, false, false}, ProfileRole::Candidate);
  std::vector<std::pair<std::string, BloomProfile>> jobs = {
      {"exact", bits_profile({true, true, false, false}, ProfileRole::Job)},
      {"disjoint", bits_profile({false, false, true, true}, ProfileRole::Job)},
  };

  auto ranked = rank_jobs_for_candidate(candidate, jobs, 10);
  CHECK(ranked.entries.size() == 2);

  // A score equal to the threshold is dropped: the disjoint job scores
  // exactly 0 and does not pass threshold 0.
  ranked = rank_jobs_for_candidate(candidate, jobs, 10, 0.0);
  REQUIRE(ranked.entries.size() == 1);
  CHECK(ranked.entries[0].id == "exact");

  ranked = rank_jobs_for_candidate(candidate, jobs, 10, 1.1);
  CHECK(ranked.entries.empty());  // nothing scores above 1
}

TEST_CASE("job ranking edge cases") {
  const auto candidate = bits_profile({true, true, false, false}, ProfileRole::Candidate);

  CHECK(rank_jobs_for_candidate(candidate, {}, 5).entries.empty());

  std::vector<std::pair<std::string, BloomProfile>> zero_job = {
      {"empty", BloomProfile(4, 1, ProfileRole::Job)}};
  const auto ranked = rank_jobs_for_candidate(candidate, zero_job, 5);
  REQUIRE(ranked.entries.size() == 1);
  CHECK(ranked.entries[0].score.value == 0.0);

  std::vector<std::pair<std::string, BloomProfile>> dup = {
      {"same", bits_profile({true, false, false, false}, ProfileRole::Job)},
      {"same", bits_profile({false, true, false, false}, ProfileRole::Job)},
  };
  CHECK_THROWS_AS(rank_jobs_for_candidate(candidate, dup, 5), InvalidInputError);
  CHECK_THROWS_AS(rank_jobs_for_candidate(candidate, {}, 0), InvalidInputError);

  const auto params = PrivacyParams::create(1.0, 1);
  const auto noisy = perturb(candidate, params, Seed{1});
  std::vector<std::pair<std::string, BloomProfile>> jobs = {
      {"a", bits_profile({true, true, false, false}, ProfileRole::Job)}};
  CHECK_THROWS_AS(rank_jobs_for_candidate(noisy, jobs, 5), StateError);
  CHECK_THROWS_AS(rank_jobs_for_candidate(candidate,
                                          {{"a", noisy}}, 5),
                  StateError);
}

TEST_CASE("candidate ranking averages applied filters") {
  const auto job = bits_profile({true, true, true, true, false, false}, ProfileRole::Job);
  const auto exact = bits_profile({true, true, true, true, false, false}, ProfileRole::Candidate);
  const auto half = bits_profile({true, true, false, false, true, true}, ProfileRole::Candidate);
  const auto off = bits_profile({false, false, false, false, true, true}, ProfileRole::Candidate);

  std::vector<CandidateHistory> candidates = {
      {"steady", {exact, exact}},
      {"mixed", {exact, off}},
      {"away", {off, off}},
  };
  const auto ranked =
      rank_candidates_for_job(job, candidates, std::nullopt, CorrectionVariant::JobOnes, 10);
  REQUIRE(ranked.entries.size() == 3);
  CHECK(ranked.entries[0].id == "steady");
  CHECK(ranked.entries[0].score.value == 1.0);
  CHECK(ranked.entries[1].id == "mixed");
  CHECK(ranked.entries[1].score.value == doctest::Approx(0.5));
  CHECK(ranked.entries[2].id == "away");
  CHECK(ranked.entries[2].score.value == 0.0);

  // Singleton histories coincide with a plain cosine sort.
  std::vector<CandidateHistory> singles = {{"h", {half}}, {"e", {exact}}, {"o", {off}}};
  const auto single_ranked =
      rank_candidates_for_job(job, singles, std::nullopt, CorrectionVariant::JobOnes, 10);
  CHECK(single_ranked.entries[0].id == "e");
  CHECK(single_ranked.entries[0].score.value == cosine(job, exact).value);
  CHECK(single_ranked.entries[1].id == "h");
  CHECK(single_ranked.entries[1].score.value == cosine(job, half).value);
  CHECK(single_ranked.entries[2].id == "o");
}

TEST_CASE("candidate ranking input validation") {
  const auto job = bits_profile({true, true, false, false}, ProfileRole::Job);
  const auto plain = bits_profile({true, false, true, false}, ProfileRole::Candidate);
  const auto params = PrivacyParams::create(1.0, 1);
  const auto noisy = perturb(plain, params, Seed{5});

  // Mixed perturbed/unperturbed history.
  std::vector<CandidateHistory> mixed = {{"c", {plain, noisy}}};
  CHECK_THROWS_AS(
      rank_candidates_for_job(job, mixed, std::nullopt, CorrectionVariant::JobOnes, 5),
      StateError);

  // Perturbed filters without params, unperturbed filters with params.
  std::vector<CandidateHistory> noisy_only = {{"c", {noisy}}};
  CHECK_THROWS_AS(
      rank_candidates_for_job(job, noisy_only, std::nullopt, CorrectionVariant::JobOnes, 5),
      StateError);
  std::vector<CandidateHistory> plain_only = {{"c", {plain}}};
  CHECK_THROWS_AS(
      rank_candidates_for_job(job, plain_only, params, CorrectionVariant::JobOnes, 5),
      StateError);

  // Empty history, duplicate ids, geometry mix.
  std::vector<CandidateHistory> empty_history = {{"c", {}}};
  CHECK_THROWS_AS(
      rank_candidates_for_job(job, empty_history, std::nullopt, CorrectionVariant::JobOnes, 5),
      InvalidInputError);
  std::vector<CandidateHistory> dup = {{"c", {plain}}, {"c", {plain}}};
  CHECK_THROWS_AS(
      rank_candidates_for_job(job, dup, std::nullopt, CorrectionVariant::JobOnes, 5),
      InvalidInputError);
  const auto wide = bits_profile({true, false, true, false, true, false, true, false},
                                 ProfileRole::Candidate);
  std::vector<CandidateHistory> geo = {{"c", {plain, wide}}};
  CHECK_THROWS_AS(
      rank_candidates_for_job(job, geo, std::nullopt, CorrectionVariant::JobOnes, 5),
      InvalidInputError);
}

TEST_CASE("unperturbed ranking matches an exhaustive oracle") {
  // Itemized reference: per candidate, mean of independently recomputed
  // cosines; sorted by (-score, id). 120 random instances at m=16.
  rng::SplitMix gen(6021);
  int instances = 0;
  while (instances < 120) {
    const std::uint16_t k = static_cast<std::uint16_t>(1 + gen.below(2));
    const auto job = random_keyword_profile(gen, 16, k, ProfileRole::Job);

    std::vector<CandidateHistory> candidates;
    std::vector<double> oracle_scores;
    for (int c = 0; c < 5; ++c) {
      CandidateHistory history;
      history.candidate_id = "cand-" + std::to_string(c);
      const std::size_t applied = 1 + gen.below(4);
      double sum = 0.0;
      for (std::size_t a = 0; a < applied; ++a) {
        history.applied.push_back(random_keyword_profile(gen, 16, k, ProfileRole::Candidate));
        sum += oracle_cosine(job, history.applied.back());
      }
      oracle_scores.push_back(sum / static_cast<double>(applied));
      candidates.push_back(std::move(history));
    }

    std::vector<std::size_t> order = {0, 1, 2, 3, 4};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (oracle_scores[a] != oracle_scores[b]) return oracle_scores[a] > oracle_scores[b];
      return candidates[a].candidate_id < candidates[b].candidate_id;
    });

    const auto ranked =
        rank_candidates_for_job(job, candidates, std::nullopt, CorrectionVariant::JobOnes, 5);
    REQUIRE(ranked.entries.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(ranked.entries[i].id == candidates[order[i]].candidate_id);
      CHECK(ranked.entries[i].score.value ==
            doctest::Approx(oracle_scores[order[i]]).epsilon(1e-12));
    }
    ++instances;
  }
}

TEST_CASE("private ranking matches a from-bits oracle") {
  // Perturbed path: the oracle recomputes the corrected cosine directly
  // from the noisy bits and the closed-form correction.
  rng::SplitMix gen(7110);
  const auto params = PrivacyParams::create(std::log(3.0), 1);

  for (int instance = 0; instance < 50; ++instance) {
    const auto job = random_keyword_profile(gen, 64, 1, ProfileRole::Job);
    const double job_ones = job.ones_count();

    std::vector<CandidateHistory> candidates;
    std::vector<double> oracle_scores;
    for (int c = 0; c < 4; ++c) {
      CandidateHistory history;
      history.candidate_id = "cand-" + std::to_string(c);
      const std::size_t applied = 1 + gen.below(3);
      double sum = 0.0;
      for (std::size_t a = 0; a < applied; ++a) {
        const auto source = random_keyword_profile(gen, 64, 1, ProfileRole::Candidate);
        const auto noisy = perturb(source, params, Seed{gen.next()});
        std::uint32_t sp = 0;
        std::uint32_t noisy_ones = 0;
        for (std::uint32_t i = 0; i < 64; ++i) {
          if (noisy.bit(i)) ++noisy_ones;
          if (noisy.bit(i) && job.bit(i)) ++sp;
        }
        const double corrected = (sp - params.p * job_ones) / (1.0 - 2.0 * params.p);
        double est = (noisy_ones - params.p * 64.0) / (1.0 - 2.0 * params.p);
        est = std::min(64.0, std::max(1.0, est));
        const double raw = corrected / std::sqrt(job_ones * est);
        sum += raw;
        history.applied.push_back(noisy);
      }
      oracle_scores.push_back(std::min(1.0, std::max(0.0, sum / applied)));
      candidates.push_back(std::move(history));
    }

    std::vector<std::size_t> order = {0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (oracle_scores[a] != oracle_scores[b]) return oracle_scores[a] > oracle_scores[b];
      return candidates[a].candidate_id < candidates[b].candidate_id;
    });

    const auto ranked =
        rank_candidates_for_job(job, candidates, params, CorrectionVariant::JobOnes, 4);
    REQUIRE(ranked.entries.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(ranked.entries[i].id == candidates[order[i]].candidate_id);
      CHECK(ranked.entries[i].score.value ==
            doctest::Approx(oracle_scores[order[i]]).epsilon(1e-9));
    }
  }
}

TEST_CASE("input order never changes the ranking") {
  rng::SplitMix gen(883);
  const auto candidate = random_keyword_profile(gen, 32, 1, ProfileRole::Candidate);
  std::vector<std::pair<std::string, BloomProfile>> jobs;
  for (int i = 0; i < 8; ++i) {
    jobs.push_back({"job-" + std::to_string(i),
                    random_keyword_profile(gen, 32, 1, ProfileRole::Job)});
  }
  const auto forward = rank_jobs_for_candidate(candidate, jobs, 8);
  std::reverse(jobs.begin(), jobs.end());
  const auto backward = rank_jobs_for_candidate(candidate, jobs, 8);
  REQUIRE(forward.entries.size() == backward.entries.size());
  for (std::size_t i = 0; i < forward.entries.size(); ++i) {
    CHECK(forward.entries[i].id == backward.entries[i].id);
    CHECK(forward.entries[i].score.value == backward.entries[i].score.value);
  }
}
