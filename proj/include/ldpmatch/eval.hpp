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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ldpmatch/corpus.hpp"
#include "ldpmatch/recommend.hpp"

namespace ldpm {

// Fraction of the top n recommended ids that are relevant, with n as the
// denominator even when the list is shorter (a warning is recorded then).
double precision_at_n(const RankedList& recommended, const std::set<std::string>& relevant,
                      std::size_t n, std::vector<std::string>* warnings = nullptr);

// Mean of precision-at-rank over the relevant ids found in the top n; 0 when
// none are found. Order-sensitive, unlike precision_at_n.
double average_precision(const RankedList& recommended, const std::set<std::string>& relevant,
                         std::size_t n, std::vector<std::string>* warnings = nullptr);

// Exact keyword-set encoding over the corpus vocabulary, used as ground
// truth: cosine here has no hash collisions and no noise.
class BinaryVectorModel {
 public:
  explicit BinaryVectorModel(const Corpus& corpus);

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  // Cosine between two jobs' keyword vectors; 0 when either is empty.
  double job_cosine(const std::string& job_a, const std::string& job_b) const;
  // Candidates ranked by mean job_cosine over their applied jobs, with the
  // same descending-score / ascending-id order as the filter-based ranking.
  RankedList rank_candidates(const Corpus& corpus, const std::string& job_id,
                             std::size_t n) const;

 private:
  std::vector<std::string> vocabulary_;
  std::map<std::string, std::vector<std::uint32_t>> vectors_;
};

enum class EvalModel : std::uint8_t { Binary, BF, BFDP };

std::string model_name(EvalModel model);

struct ExperimentConfig {
  EvalModel model = EvalModel::BFDP;
  std::uint32_t m = 4096;
  std::uint16_t k = 1;
  std::vector<double> epsilons;  // required (non-empty) for BFDP, ignored otherwise
  std::size_t n = 20;
  std::size_t jobs_sample = 50;
  std::size_t runs = 10;
  Seed seed{1};
  CorrectionVariant correction = CorrectionVariant::JobOnes;
  std::size_t threads = 1;
};

struct ResultRow {
  std::string model;
  std::uint32_t m = 0;
  std::uint16_t k = 0;
  double epsilon = 0.0;
  std::string job_id;
  std::size_t run = 0;
  double precision_at_n = 0.0;
  double average_precision = 0.0;
};

// Samples open jobs (a fixed sample per master seed, shared by every model
// so rows pair up), takes each job's binary top-n candidates as its relevant
// set, re-ranks under the configured model, and emits one row per (epsilon,)
// job, run. Candidate filters are perturbed freshly per run, not per job:
// within a run every job scores against the same published noisy filters.
std::vector<ResultRow> run_experiment(const Corpus& corpus, const ExperimentConfig& config);

// CSV with header model,m,k,epsilon,job_id,run,precision_at_n,average_precision.
void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path);
// Per-(model,m,k,epsilon) mean and sample standard deviation of both metrics.
void write_summary_csv(const std::vector<ResultRow>& rows, const std::string& path);

// Shortest decimal form that round-trips the value (what the CSVs use).
std::string format_double(double value);

}  // namespace ldpm
