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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ldpmatch/bloom.hpp"
#include "ldpmatch/ldp.hpp"

namespace ldpm {

struct JobDocument {
  std::string job_id;
  std::string title;
  std::string description;
  std::string requirements;
};

// Jobs with their extracted keywords, candidate application histories, and
// the subset of jobs nobody has applied to. warnings collects non-fatal
// oddities (dropped candidates, keyword-less jobs) for the caller to log.
struct Corpus {
  std::map<std::string, KeywordSet> jobs;
  std::map<std::string, std::vector<std::string>> applications;
  std::vector<std::string> open_jobs;
  std::vector<std::string> warnings;
};

// Checks referential integrity: applications point at existing jobs, open
// jobs exist and are disjoint from every application history, no candidate
// applies to the same job twice. Throws InvalidInputError on violation.
void validate_corpus(const Corpus& corpus);

struct CountRange {
  std::uint32_t min = 0;
  std::uint32_t max = 0;
};

struct SynthConfig {
  std::uint32_t topics = 8;
  std::uint32_t vocab_per_topic = 600;
  std::uint32_t shared_vocab = 800;
  std::uint32_t jobs = 2000;
  std::uint32_t candidates = 64;
  std::uint32_t open_jobs = 500;  // reserved out of `jobs`, never applied to
  CountRange keywords_per_job{150, 450};
  CountRange applications_per_candidate{5, 8};
  Seed seed{1};
};

struct SynthStats {
  double mean_keywords_per_job = 0.0;
  std::uint32_t min_keywords_per_job = 0;
  std::uint32_t max_keywords_per_job = 0;
};

// Splits text into lowercase alphanumeric tokens, dropping stopwords and
// tokens shorter than 2 characters. Duplicates are kept so callers can count
// term frequency.
std::vector<std::string> tokenize(std::string_view text);
bool is_stopword(std::string_view token);

// TF-IDF keyword extraction over the whole document list: score(t, d) =
// tf(t,d) * ln(N / df(t)); every token with positive score is kept. A job
// whose score set comes out empty maps to an empty KeywordSet and adds a
// warning.
std::map<std::string, KeywordSet> extract_keywords(const std::vector<JobDocument>& documents,
                                                   std::vector<std::string>* warnings = nullptr);

// Deterministic topic-model corpus: each job samples keywords from one
// latent topic's vocabulary mixed with a shared vocabulary, each candidate
// applies to jobs of one home topic, and a fixed subset of jobs is held out
// as open.
Corpus generate_synthetic(const SynthConfig& config, SynthStats* stats = nullptr);

// Loads a jobs TSV (columns job_id, title, description, requirements) and an
// applications TSV (columns candidate_id, job_id), extracts keywords, drops
// candidates with fewer than 5 applications (with a warning), and marks jobs
// no application row references as open.
Corpus import_tabular(const std::string& jobs_path, const std::string& applications_path);

BloomProfile read_profile_file(const std::string& path);
void write_profile_file(const BloomProfile& profile, const std::string& path);

// A corpus persisted to a directory: one canonical profile file per job and
// per (candidate, applied job), plus index.json tying ids to files and
// holding the keyword lists so filters can be rebuilt at other (m, k).
struct StoredCorpus {
  Corpus corpus;
  std::uint32_t m = 0;
  std::uint16_t k = 0;
  std::string root;
  std::map<std::string, std::string> job_files;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> candidate_files;
};

void save_corpus(const Corpus& corpus, const std::string& dir, std::uint32_t m, std::uint16_t k);
StoredCorpus load_corpus(const std::string& dir);

}  // namespace ldpm
