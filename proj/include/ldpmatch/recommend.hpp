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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ldpmatch/bloom.hpp"
#include "ldpmatch/ldp.hpp"
#include "ldpmatch/similarity.hpp"

namespace ldpm {

// One applicant: their id and one filter per job they applied to. All
// applied filters must share m, k and the perturbed flag; an applicant is
// scored by the mean similarity of these filters against a target job.
struct CandidateHistory {
  std::string candidate_id;
  std::vector<BloomProfile> applied;
};

struct RankedEntry {
  std::string id;
  SimilarityScore score;
};

// Descending by score.value, ties broken by ascending id, at most n entries,
// no duplicate ids.
struct RankedList {
  std::vector<RankedEntry> entries;
  std::size_t n = 0;
};

// Scores every job against the candidate's own (unperturbed) filter and
// returns the top n, optionally dropping scores at or below `threshold`.
// All-zero filters score 0 instead of failing. Empty job list gives an
// empty RankedList.
RankedList rank_jobs_for_candidate(const BloomProfile& candidate,
                                   const std::vector<std::pair<std::string, BloomProfile>>& jobs,
                                   std::size_t n, std::optional<double> threshold = std::nullopt);

// Scores every applicant against the job by the arithmetic mean over their
// applied filters: plain cosine when params is absent (all filters must be
// unperturbed), corrected private cosine when params is present (all filters
// must be perturbed). Mixing perturbed and unperturbed inputs is a state
// error. The optional threshold filters mean scores like in
// rank_jobs_for_candidate.
RankedList rank_candidates_for_job(const BloomProfile& job,
                                   const std::vector<CandidateHistory>& candidates,
                                   const std::optional<PrivacyParams>& params,
                                   CorrectionVariant variant, std::size_t n,
                                   std::optional<double> threshold = std::nullopt);

}  // namespace ldpm
