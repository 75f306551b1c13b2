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

#include "ldpmatch/recommend.hpp"

#include <algorithm>
#include <set>

#include "ldpmatch/errors.hpp"

namespace ldpm {
namespace {

void check_n(std::size_t n) {
  if (n == 0) throw InvalidInputError("requested list length n must be positive");
}

// Scores one pair, treating degenerate all-zero filters as similarity 0 so a
// single empty profile cannot abort a batch ranking.
SimilarityScore score_or_zero(const BloomProfile& a, const BloomProfile& b,
                              const std::optional<PrivacyParams>& params,
                              CorrectionVariant variant) {
  try {
    return params ? private_cosine(a, b, *params, variant) : cosine(a, b);
  } catch (const UndefinedSimilarityError&) {
    return SimilarityScore::from_raw(0.0);
  }
}

RankedList assemble(std::vector<RankedEntry> scored, std::size_t n,
                    std::optional<double> threshold) {
  if (threshold) {
    std::erase_if(scored, [&](const RankedEntry& e) { return !(e.score.value > *threshold); });
  }
  std::sort(scored.begin(), scored.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score.value != b.score.value) return a.score.value > b.score.value;
    return a.id < b.id;
  });
  if (scored.size() > n) scored.resize(n);
  RankedList out;
  out.entries = std::move(scored);
  out.n = n;
  return out;
}

}  // namespace

RankedList rank_jobs_for_candidate(const BloomProfile& candidate,
                                   const std::vector<std::pair<std::string, BloomProfile>>& jobs,
                                   std::size_t n, std::optional<double> threshold) {
  check_n(n);
  if (candidate.perturbed()) {
    throw StateError("job ranking runs on the candidate's own unperturbed filter");
  }
  std::set<std::string> seen;
  std::vector<RankedEntry> scored;
  scored.reserve(jobs.size());
  for (const auto& [id, profile] : jobs) {
    if (!seen.insert(id).second) throw InvalidInputError("duplicate job id: " + id);
    if (profile.perturbed()) throw StateError("job filter " + id + " is perturbed");
    scored.push_back({id, score_or_zero(candidate, profile, std::nullopt,
                                        CorrectionVariant::JobOnes)});
  }
  return assemble(std::move(scored), n, threshold);
}

RankedList rank_candidates_for_job(const BloomProfile& job,
                                   const std::vector<CandidateHistory>& candidates,
                                   const std::optional<PrivacyParams>& params,
                                   CorrectionVariant variant, std::size_t n,
                                   std::optional<double> threshold) {
  check_n(n);
  if (job.perturbed()) throw StateError("target job filter must be unperturbed");
  std::set<std::string> seen;
  std::vector<RankedEntry> scored;
  scored.reserve(candidates.size());
  for (const CandidateHistory& candidate : candidates) {
    if (!seen.insert(candidate.candidate_id).second) {
      throw InvalidInputError("duplicate candidate id: " + candidate.candidate_id);
    }
    if (candidate.applied.empty()) {
      throw InvalidInputError("candidate " + candidate.candidate_id + " has no applied filters");
    }
    double sum_raw = 0.0;
    for (const BloomProfile& profile : candidate.applied) {
      if (profile.m() != candidate.applied.front().m() ||
          profile.k() != candidate.applied.front().k()) {
        throw InvalidInputError("candidate " + candidate.candidate_id +
                                " mixes filter geometries");
      }
      if (profile.perturbed() != params.has_value()) {
        throw StateError(params ? "expected perturbed candidate filters"
                                : "expected unperturbed candidate filters");
      }
      sum_raw += score_or_zero(job, profile, params, variant).raw;
    }
    scored.push_back({candidate.candidate_id,
                      SimilarityScore::from_raw(sum_raw / candidate.applied.size())});
  }
  return assemble(std::move(scored), n, threshold);
}

}  // namespace ldpm
