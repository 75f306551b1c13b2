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

#include "ldpmatch/eval.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

#include "ldpmatch/errors.hpp"
#include "ldpmatch/rng.hpp"

namespace ldpm {
namespace {

void warn_short_list(const RankedList& recommended, std::size_t n,
                     std::vector<std::string>* warnings) {
  if (warnings && recommended.entries.size() < n) {
    warnings->push_back("ranked list has " + std::to_string(recommended.entries.size()) +
                        " entries, metric cut-off is " + std::to_string(n));
  }
}

// Deterministic worker pool: fn(i) for i in [0, count). Results must be
// written to per-index slots so thread scheduling cannot change the output.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<std::uint32_t> sorted_indices(const KeywordSet& keywords,
                                          const std::map<std::string, std::uint32_t>& index) {
  std::vector<std::uint32_t> out;
  out.reserve(keywords.size());
  for (const std::string& token : keywords) out.push_back(index.at(token));
  return out;  // KeywordSet iterates lexicographically, index is built the
               // same way, so this is already sorted
}

std::size_t intersection_size(const std::vector<std::uint32_t>& a,
                              const std::vector<std::uint32_t>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

RankedList assemble_top_n(std::vector<RankedEntry> scored, std::size_t n) {
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

struct MetricPair {
  double precision = 0.0;
  double average_precision = 0.0;
};

MetricPair metrics_for(const RankedList& ranked, const std::set<std::string>& relevant,
                       std::size_t n) {
  return {precision_at_n(ranked, relevant, n), average_precision(ranked, relevant, n)};
}

}  // namespace

double precision_at_n(const RankedList& recommended, const std::set<std::string>& relevant,
                      std::size_t n, std::vector<std::string>* warnings) {
  if (n == 0) throw InvalidInputError("metric cut-off n must be positive");
  warn_short_list(recommended, n, warnings);
  const std::size_t limit = std::min(n, recommended.entries.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < limit; ++i) {
    if (relevant.count(recommended.entries[i].id)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

double average_precision(const RankedList& recommended, const std::set<std::string>& relevant,
                         std::size_t n, std::vector<std::string>* warnings) {
  if (n == 0) throw InvalidInputError("metric cut-off n must be positive");
  warn_short_list(recommended, n, warnings);
  const std::size_t limit = std::min(n, recommended.entries.size());
  // Compensated sum plus a corrected division so the mean is correctly
  // rounded: plain sum/hits lands one ulp off on textbook cases like
  // (1 + 1/2 + 3/5) / 3, which callers compare against decimal constants.
  std::size_t hits = 0;
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t rank = 1; rank <= limit; ++rank) {
    if (relevant.count(recommended.entries[rank - 1].id)) {
      ++hits;
      const double term = static_cast<double>(hits) / static_cast<double>(rank);
      const double next = sum + term;
      comp += sum >= term ? (sum - next) + term : (term - next) + sum;
      sum = next;
    }
  }
  if (hits == 0) return 0.0;
  const double h = static_cast<double>(hits);
  const double quotient = (sum + comp) / h;
  const double residual = std::fma(-quotient, h, sum) + comp;
  return quotient + residual / h;
}

BinaryVectorModel::BinaryVectorModel(const Corpus& corpus) {
  std::map<std::string, std::uint32_t> index;
  for (const auto& [job_id, keywords] : corpus.jobs) {
    for (const std::string& token : keywords) index.emplace(token, 0);
  }
  vocabulary_.reserve(index.size());
  for (auto& [token, slot] : index) {
    slot = static_cast<std::uint32_t>(vocabulary_.size());
    vocabulary_.push_back(token);
  }
  for (const auto& [job_id, keywords] : corpus.jobs) {
    vectors_.emplace(job_id, sorted_indices(keywords, index));
  }
}

double BinaryVectorModel::job_cosine(const std::string& job_a, const std::string& job_b) const {
  const auto ia = vectors_.find(job_a);
  const auto ib = vectors_.find(job_b);
  if (ia == vectors_.end() || ib == vectors_.end()) {
    throw InvalidInputError("unknown job id in cosine: " +
                            (ia == vectors_.end() ? job_a : job_b));
  }
  if (ia->second.empty() || ib->second.empty()) return 0.0;
  // sqrt of the product keeps self-similarity exactly 1 (perfect square).
  return static_cast<double>(intersection_size(ia->second, ib->second)) /
         std::sqrt(static_cast<double>(ia->second.size()) *
                   static_cast<double>(ib->second.size()));
}

RankedList BinaryVectorModel::rank_candidates(const Corpus& corpus, const std::string& job_id,
                                              std::size_t n) const {
  if (n == 0) throw InvalidInputError("requested list length n must be positive");
  std::vector<RankedEntry> scored;
  scored.reserve(corpus.applications.size());
  for (const auto& [candidate_id, applied] : corpus.applications) {
    double sum = 0.0;
    for (const std::string& applied_job : applied) sum += job_cosine(job_id, applied_job);
    scored.push_back({candidate_id,
                      SimilarityScore::from_raw(sum / static_cast<double>(applied.size()))});
  }
  return assemble_top_n(std::move(scored), n);
}

std::string model_name(EvalModel model) {
  switch (model) {
    case EvalModel::Binary: return "binary";
    case EvalModel::BF: return "bf";
    case EvalModel::BFDP: return "bfdp";
  }
  throw InvalidInputError("unknown evaluation model");
}

std::vector<ResultRow> run_experiment(const Corpus& corpus, const ExperimentConfig& config) {
  validate_corpus(corpus);
  if (config.runs < 1) throw ConfigError("runs must be positive");
  if (config.n < 1) throw ConfigError("n must be positive");
  if (config.jobs_sample < 1) throw ConfigError("jobs_sample must be positive");
  if (config.jobs_sample > corpus.open_jobs.size()) {
    throw ConfigError("jobs_sample " + std::to_string(config.jobs_sample) +
                      " exceeds the " + std::to_string(corpus.open_jobs.size()) +
                      " open jobs");
  }
  if (corpus.applications.empty()) throw InvalidInputError("corpus has no candidates");
  for (const auto& [candidate_id, applied] : corpus.applications) {
    if (applied.size() < 5) {
      throw InvalidInputError("candidate " + candidate_id + " has " +
                              std::to_string(applied.size()) +
                              " applications; evaluation requires at least 5");
    }
  }
  if (config.model == EvalModel::BFDP && config.epsilons.empty()) {
    throw ConfigError("BFDP evaluation needs at least one epsilon");
  }

  const std::uint64_t master = config.seed.value;
  const std::string name = model_name(config.model);

  // One job sample per master seed, independent of model and parameters, so
  // rows from different experiment configs compare the same jobs.
  std::vector<std::string> sampled = corpus.open_jobs;  // already sorted
  {
    rng::SplitMix gen(rng::derive_seed(master, "job-sample"));
    for (std::size_t i = 0; i < config.jobs_sample; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(gen.below(sampled.size() - i));
      std::swap(sampled[i], sampled[j]);
    }
    sampled.resize(config.jobs_sample);
    std::sort(sampled.begin(), sampled.end());
  }

  const BinaryVectorModel binary(corpus);
  std::vector<RankedList> binary_rankings(sampled.size());
  std::vector<std::set<std::string>> relevant(sampled.size());
  parallel_for(sampled.size(), config.threads, [&](std::size_t i) {
    binary_rankings[i] = binary.rank_candidates(corpus, sampled[i], config.n);
    for (const RankedEntry& entry : binary_rankings[i].entries) {
      relevant[i].insert(entry.id);
    }
  });

  std::vector<ResultRow> rows;
  rows.reserve(sampled.size() * config.runs *
               (config.model == EvalModel::BFDP ? config.epsilons.size() : 1));

  if (config.model == EvalModel::Binary) {
    for (std::size_t i = 0; i < sampled.size(); ++i) {
      const MetricPair metric = metrics_for(binary_rankings[i], relevant[i], config.n);
      for (std::size_t run = 0; run < config.runs; ++run) {
        rows.push_back({name, 0, 0, 0.0, sampled[i], run, metric.precision,
                        metric.average_precision});
      }
    }
  } else {
    // Filters are rebuilt from keywords at this experiment's (m, k).
    std::map<std::string, BloomProfile> job_filters;
    for (const std::string& job_id : sampled) {
      job_filters.emplace(job_id, BloomProfile::from_keywords(corpus.jobs.at(job_id), config.m,
                                                              config.k, ProfileRole::Job));
    }
    std::vector<CandidateHistory> base_histories;
    base_histories.reserve(corpus.applications.size());
    for (const auto& [candidate_id, applied] : corpus.applications) {
      CandidateHistory history;
      history.candidate_id = candidate_id;
      for (const std::string& applied_job : applied) {
        history.applied.push_back(BloomProfile::from_keywords(
            corpus.jobs.at(applied_job), config.m, config.k, ProfileRole::Candidate));
      }
      base_histories.push_back(std::move(history));
    }

    auto emit_cell = [&](double epsilon, const std::optional<PrivacyParams>& params,
                         const std::vector<CandidateHistory>& histories, std::size_t run) {
      std::vector<MetricPair> cell(sampled.size());
      parallel_for(sampled.size(), config.threads, [&](std::size_t i) {
        const RankedList ranked = rank_candidates_for_job(
            job_filters.at(sampled[i]), histories, params, config.correction, config.n);
        cell[i] = metrics_for(ranked, relevant[i], config.n);
      });
      for (std::size_t i = 0; i < sampled.size(); ++i) {
        rows.push_back({name, config.m, config.k, epsilon, sampled[i], run,
                        cell[i].precision, cell[i].average_precision});
      }
    };

    if (config.model == EvalModel::BF) {
      for (std::size_t run = 0; run < config.runs; ++run) {
        emit_cell(0.0, std::nullopt, base_histories, run);
      }
    } else {
      std::vector<double> epsilons = config.epsilons;
      std::sort(epsilons.begin(), epsilons.end());
      for (double epsilon : epsilons) {
        const PrivacyParams params = PrivacyParams::create(epsilon, config.k);
        for (std::size_t run = 0; run < config.runs; ++run) {
          // Candidates publish one noisy filter per applied job per run; all
          // sampled jobs score against the same published filters.
          std::vector<CandidateHistory> perturbed = base_histories;
          for (CandidateHistory& history : perturbed) {
            for (std::size_t a = 0; a < history.applied.size(); ++a) {
              const Seed seed{rng::derive_seed(
                  master, "perturb", name, static_cast<std::uint64_t>(config.m),
                  static_cast<std::uint64_t>(config.k), std::bit_cast<std::uint64_t>(epsilon),
                  static_cast<std::uint64_t>(run), history.candidate_id,
                  static_cast<std::uint64_t>(a))};
              history.applied[a] = perturb(history.applied[a], params, seed);
            }
          }
          emit_cell(epsilon, params, perturbed, run);
        }
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.model, a.m, a.k, a.epsilon, a.job_id, a.run) <
           std::tie(b.model, b.m, b.k, b.epsilon, b.job_id, b.run);
  });
  return rows;
}

std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw Error("double formatting failed");
  return std::string(buffer, end);
}

void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "model,m,k,epsilon,job_id,run,precision_at_n,average_precision\n";
  for (const ResultRow& row : rows) {
    out << row.model << ',' << row.m << ',' << row.k << ',' << format_double(row.epsilon)
        << ',' << row.job_id << ',' << row.run << ',' << format_double(row.precision_at_n)
        << ',' << format_double(row.average_precision) << '\n';
  }
  if (!out) throw IoError("write failed on " + path);
}

void write_summary_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  struct Key {
    std::string model;
    std::uint32_t m;
    std::uint16_t k;
    double epsilon;
    bool operator<(const Key& other) const {
      return std::tie(model, m, k, epsilon) <
             std::tie(other.model, other.m, other.k, other.epsilon);
    }
  };
  struct Acc {
    std::vector<double> precision;
    std::vector<double> average_precision;
  };
  std::map<Key, Acc> groups;
  for (const ResultRow& row : rows) {
    Acc& acc = groups[Key{row.model, row.m, row.k, row.epsilon}];
    acc.precision.push_back(row.precision_at_n);
    acc.average_precision.push_back(row.average_precision);
  }
  auto mean_of = [](const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  };
  auto stddev_of = [&](const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
  };
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "model,m,k,epsilon,rows,mean_precision_at_n,stddev_precision_at_n,"
         "mean_average_precision,stddev_average_precision\n";
  for (const auto& [key, acc] : groups) {
    out << key.model << ',' << key.m << ',' << key.k << ',' << format_double(key.epsilon)
        << ',' << acc.precision.size() << ',' << format_double(mean_of(acc.precision)) << ','
        << format_double(stddev_of(acc.precision)) << ','
        << format_double(mean_of(acc.average_precision)) << ','
        << format_double(stddev_of(acc.average_precision)) << '\n';
  }
  if (!out) throw IoError("write failed on " + path);
}

}  // namespace ldpm
