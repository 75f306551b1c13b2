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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldpmatch/bloom.hpp"
#include "ldpmatch/corpus.hpp"
#include "ldpmatch/errors.hpp"
#include "ldpmatch/eval.hpp"
#include "ldpmatch/ldp.hpp"
#include "ldpmatch/netsim.hpp"
#include "ldpmatch/recommend.hpp"
#include "ldpmatch/rng.hpp"
#include "ldpmatch/sha256.hpp"
#include "ldpmatch/similarity.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Accepts plain decimals plus the aliases ln2 and ln3 for the two privacy
// budgets everything in the docs talks about.
double parse_epsilon(const std::string& text) {
  if (text == "ln2") return std::log(2.0);
  if (text == "ln3") return std::log(3.0);
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw ldpm::InvalidInputError("bad epsilon '" + text + "': expected a number, ln2 or ln3");
  }
}

// The hashing scheme only guarantees k distinct positions per keyword for
// power-of-two filter lengths, so the tool refuses anything else up front.
void require_power_of_two_m(std::uint32_t m) {
  if (m < 2 || (m & (m - 1)) != 0) {
    throw ldpm::ConfigError("filter length m must be a power of two >= 2, got " +
                            std::to_string(m));
  }
}

// Every run prints its fully resolved configuration (defaults included) to
// stderr, so a CSV or report can always be traced back to exact settings.
void log_config(const std::string& command, const ordered_json& values) {
  std::cerr << command << " config: " << values.dump() << "\n";
}

void log_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw ldpm::IoError("cannot open " + path + " for writing");
  fn(out);
  out.flush();
  if (!out) throw ldpm::IoError("write failed on " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ldpm::IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ldpm::IoError("read failed on " + path);
  return buffer.str();
}

void write_ranked_csv(const ldpm::RankedList& ranked, const char* id_column, std::ostream& out) {
  out << "rank," << id_column << ",score,raw_score\n";
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    const ldpm::RankedEntry& entry = ranked.entries[i];
    out << (i + 1) << ',' << entry.id << ',' << ldpm::format_double(entry.score.value) << ','
        << ldpm::format_double(entry.score.raw) << '\n';
  }
}

// Cluster spec grammar: name=members[;name=members...], members being
// comma-separated node ids or id ranges, e.g. "all=0-15" or "ab=0,1,4-7".
std::vector<std::pair<std::string, std::vector<std::uint32_t>>> parse_clusters(
    const std::string& text) {
  std::vector<std::pair<std::string, std::vector<std::uint32_t>>> clusters;
  std::istringstream groups(text);
  std::string group;
  auto parse_id = [&](const std::string& t) -> std::uint32_t {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(t, &used);
      if (used != t.size() || v > 0xFFFFFFFFul) throw std::invalid_argument("range");
      return static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      throw ldpm::ConfigError("bad node id '" + t + "' in cluster spec");
    }
  };
  while (std::getline(groups, group, ';')) {
    const std::size_t eq = group.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == group.size()) {
      throw ldpm::ConfigError("cluster spec entry '" + group + "' is not name=members");
    }
    std::vector<std::uint32_t> members;
    std::istringstream items(group.substr(eq + 1));
    std::string item;
    while (std::getline(items, item, ',')) {
      const std::size_t dash = item.find('-');
      if (dash == std::string::npos) {
        members.push_back(parse_id(item));
      } else {
        const std::uint32_t lo = parse_id(item.substr(0, dash));
        const std::uint32_t hi = parse_id(item.substr(dash + 1));
        if (hi < lo) throw ldpm::ConfigError("empty node range '" + item + "' in cluster spec");
        for (std::uint32_t i = lo; i <= hi; ++i) members.push_back(i);
      }
    }
    if (members.empty()) {
      throw ldpm::ConfigError("cluster '" + group.substr(0, eq) + "' has no members");
    }
    clusters.emplace_back(group.substr(0, eq), std::move(members));
  }
  if (clusters.empty()) throw ldpm::ConfigError("cluster spec is empty");
  return clusters;
}

std::string join_path(const std::string& root, const std::string& relative) {
  return (fs::path(root) / relative).string();
}

std::vector<ldpm::CandidateHistory> load_histories(const ldpm::StoredCorpus& stored) {
  std::vector<ldpm::CandidateHistory> histories;
  histories.reserve(stored.candidate_files.size());
  for (const auto& [candidate_id, files] : stored.candidate_files) {
    ldpm::CandidateHistory history;
    history.candidate_id = candidate_id;
    history.applied.reserve(files.size());
    for (const auto& [job_id, file] : files) {
      history.applied.push_back(ldpm::read_profile_file(join_path(stored.root, file)));
    }
    histories.push_back(std::move(history));
  }
  return histories;
}

struct SynthArgs {
  ldpm::SynthConfig config;
  std::uint64_t seed = 1;
  std::uint32_t m = 4096;
  std::uint16_t k = 1;
  std::string output;
};

void run_corpus_synth(const SynthArgs& args) {
  require_power_of_two_m(args.m);
  ldpm::SynthConfig config = args.config;
  config.seed = ldpm::Seed{args.seed};
  log_config("corpus synth",
             {{"jobs", config.jobs},
              {"candidates", config.candidates},
              {"open_jobs", config.open_jobs},
              {"topics", config.topics},
              {"vocab_per_topic", config.vocab_per_topic},
              {"shared_vocab", config.shared_vocab},
              {"keywords_min", config.keywords_per_job.min},
              {"keywords_max", config.keywords_per_job.max},
              {"apps_min", config.applications_per_candidate.min},
              {"apps_max", config.applications_per_candidate.max},
              {"seed", args.seed},
              {"m", args.m},
              {"k", args.k},
              {"output", args.output}});
  ldpm::SynthStats stats;
  const ldpm::Corpus corpus = ldpm::generate_synthetic(config, &stats);
  log_warnings(corpus.warnings);
  ldpm::save_corpus(corpus, args.output, args.m, args.k);
  std::cerr << "wrote " << corpus.jobs.size() << " jobs (" << corpus.open_jobs.size()
            << " open), " << corpus.applications.size() << " candidates to " << args.output
            << "; keywords per job mean " << ldpm::format_double(stats.mean_keywords_per_job)
            << " range [" << stats.min_keywords_per_job << ", " << stats.max_keywords_per_job
            << "]\n";
}

struct ImportArgs {
  std::string jobs_tsv;
  std::string applications_tsv;
  std::uint32_t m = 4096;
  std::uint16_t k = 1;
  std::string output;
};

void run_corpus_import(const ImportArgs& args) {
  require_power_of_two_m(args.m);
  log_config("corpus import", {{"jobs_tsv", args.jobs_tsv},
                               {"applications_tsv", args.applications_tsv},
                               {"m", args.m},
                               {"k", args.k},
                               {"output", args.output}});
  const ldpm::Corpus corpus = ldpm::import_tabular(args.jobs_tsv, args.applications_tsv);
  log_warnings(corpus.warnings);
  ldpm::save_corpus(corpus, args.output, args.m, args.k);
  std::cerr << "wrote " << corpus.jobs.size() << " jobs (" << corpus.open_jobs.size()
            << " open), " << corpus.applications.size() << " candidates to " << args.output
            << "\n";
}

struct BuildArgs {
  std::vector<std::string> keywords;
  std::string keywords_file;
  std::uint32_t m = 4096;
  std::uint16_t k = 1;
  ldpm::ProfileRole role = ldpm::ProfileRole::Candidate;
  std::string output;
};

void run_profile_build(const BuildArgs& args) {
  require_power_of_two_m(args.m);
  log_config("profile build",
             {{"keywords", args.keywords},
              {"keywords_file", args.keywords_file},
              {"m", args.m},
              {"k", args.k},
              {"role", args.role == ldpm::ProfileRole::Job ? "job" : "candidate"},
              {"output", args.output}});
  ldpm::KeywordSet keywords;
  for (const std::string& keyword : args.keywords) keywords.add(keyword);
  if (!args.keywords_file.empty()) {
    std::istringstream lines(read_text_file(args.keywords_file));
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) keywords.add(line);
    }
  }
  if (keywords.empty()) {
    throw ldpm::InvalidInputError("no keywords given; use --keywords and/or --keywords-file");
  }
  const ldpm::BloomProfile profile =
      ldpm::BloomProfile::from_keywords(keywords, args.m, args.k, args.role);
  ldpm::write_profile_file(profile, args.output);
  std::cerr << "wrote profile m=" << args.m << " k=" << args.k << " ones="
            << profile.ones_count() << " to " << args.output << "\n";
}

struct PerturbArgs {
  std::string epsilon;
  std::uint16_t k = 0;  // 0 = take k from the input profile
  std::uint64_t seed = 1;
  std::string input;
  std::string output;
};

void run_profile_perturb(const PerturbArgs& args) {
  const ldpm::BloomProfile source = ldpm::read_profile_file(args.input);
  const std::uint16_t k = args.k != 0 ? args.k : source.k();
  const double epsilon = parse_epsilon(args.epsilon);
  log_config("profile perturb", {{"epsilon", epsilon},
                                 {"k", k},
                                 {"seed", args.seed},
                                 {"input", args.input},
                                 {"output", args.output}});
  const ldpm::PrivacyParams params = ldpm::PrivacyParams::create(epsilon, k);
  const ldpm::BloomProfile noisy = ldpm::perturb(source, params, ldpm::Seed{args.seed});
  ldpm::write_profile_file(noisy, args.output);
  std::cerr << "wrote perturbed profile (flip probability "
            << ldpm::format_double(params.p) << ") to " << args.output << "\n";
}

struct RecommendJobsArgs {
  std::string corpus_dir;
  std::string candidate_profile;
  std::size_t n = 20;
  double threshold = 0.0;
  bool has_threshold = false;
  bool all_jobs = false;
  std::string output;
};

void run_recommend_jobs(const RecommendJobsArgs& args) {
  log_config("recommend jobs", {{"corpus", args.corpus_dir},
                                {"candidate", args.candidate_profile},
                                {"n", args.n},
                                {"threshold", args.has_threshold ? ordered_json(args.threshold)
                                                                 : ordered_json(nullptr)},
                                {"all_jobs", args.all_jobs},
                                {"output", args.output.empty() ? "-" : args.output}});
  const ldpm::StoredCorpus stored = ldpm::load_corpus(args.corpus_dir);
  const ldpm::BloomProfile candidate = ldpm::read_profile_file(args.candidate_profile);
  std::vector<std::pair<std::string, ldpm::BloomProfile>> jobs;
  if (args.all_jobs) {
    for (const auto& [job_id, file] : stored.job_files) {
      jobs.emplace_back(job_id, ldpm::read_profile_file(join_path(stored.root, file)));
    }
  } else {
    for (const std::string& job_id : stored.corpus.open_jobs) {
      jobs.emplace_back(job_id,
                        ldpm::read_profile_file(join_path(stored.root, stored.job_files.at(job_id))));
    }
  }
  const std::optional<double> threshold =
      args.has_threshold ? std::optional<double>(args.threshold) : std::nullopt;
  const ldpm::RankedList ranked =
      ldpm::rank_jobs_for_candidate(candidate, jobs, args.n, threshold);
  with_output(args.output, [&](std::ostream& out) { write_ranked_csv(ranked, "job_id", out); });
}

struct RecommendCandidatesArgs {
  std::string corpus_dir;
  std::string job_id;
  std::string job_profile;
  std::string epsilon;  // empty = rank unperturbed
  std::uint64_t seed = 1;
  ldpm::CorrectionVariant correction = ldpm::CorrectionVariant::JobOnes;
  std::size_t n = 20;
  double threshold = 0.0;
  bool has_threshold = false;
  std::string output;
};

void run_recommend_candidates(const RecommendCandidatesArgs& args) {
  const ldpm::StoredCorpus stored = ldpm::load_corpus(args.corpus_dir);
  const bool private_mode = !args.epsilon.empty();
  log_config("recommend candidates",
             {{"corpus", args.corpus_dir},
              {"job", args.job_id},
              {"job_profile", args.job_profile},
              {"epsilon", private_mode ? ordered_json(parse_epsilon(args.epsilon))
                                       : ordered_json(nullptr)},
              {"seed", args.seed},
              {"correction", args.correction == ldpm::CorrectionVariant::JobOnes
                                 ? "job-ones"
                                 : "perturbed-ones"},
              {"n", args.n},
              {"threshold", args.has_threshold ? ordered_json(args.threshold)
                                               : ordered_json(nullptr)},
              {"output", args.output.empty() ? "-" : args.output}});
  ldpm::BloomProfile job = [&] {
    if (!args.job_profile.empty()) return ldpm::read_profile_file(args.job_profile);
    const auto it = stored.job_files.find(args.job_id);
    if (it == stored.job_files.end()) {
      throw ldpm::InvalidInputError("job id '" + args.job_id + "' not in corpus");
    }
    return ldpm::read_profile_file(join_path(stored.root, it->second));
  }();
  std::vector<ldpm::CandidateHistory> histories = load_histories(stored);
  std::optional<ldpm::PrivacyParams> params;
  if (private_mode) {
    params = ldpm::PrivacyParams::create(parse_epsilon(args.epsilon), stored.k);
    for (ldpm::CandidateHistory& history : histories) {
      for (std::size_t i = 0; i < history.applied.size(); ++i) {
        const ldpm::Seed seed{ldpm::rng::derive_seed(args.seed, "perturb",
                                                     history.candidate_id,
                                                     static_cast<std::uint64_t>(i))};
        history.applied[i] = ldpm::perturb(history.applied[i], *params, seed);
      }
    }
  }
  const std::optional<double> threshold =
      args.has_threshold ? std::optional<double>(args.threshold) : std::nullopt;
  const ldpm::RankedList ranked = ldpm::rank_candidates_for_job(
      job, histories, params, args.correction, args.n, threshold);
  with_output(args.output,
              [&](std::ostream& out) { write_ranked_csv(ranked, "candidate_id", out); });
}

struct EvalCommonArgs {
  std::string corpus_dir;
  std::size_t runs = 10;
  std::size_t jobs_sample = 50;
  std::size_t n = 20;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  ldpm::CorrectionVariant correction = ldpm::CorrectionVariant::JobOnes;
  std::string output;
  std::string summary;
};

void finish_eval(std::vector<ldpm::ResultRow> rows, const EvalCommonArgs& common) {
  std::sort(rows.begin(), rows.end(), [](const ldpm::ResultRow& a, const ldpm::ResultRow& b) {
    return std::tie(a.model, a.m, a.k, a.epsilon, a.job_id, a.run) <
           std::tie(b.model, b.m, b.k, b.epsilon, b.job_id, b.run);
  });
  ldpm::write_results_csv(rows, common.output);
  std::cerr << "wrote " << rows.size() << " result rows to " << common.output << "\n";
  if (!common.summary.empty()) {
    ldpm::write_summary_csv(rows, common.summary);
    std::cerr << "wrote summary to " << common.summary << "\n";
  }
}

struct EvalSweepArgs {
  EvalCommonArgs common;
  std::vector<std::string> epsilons{"ln2", "ln3", "2", "4", "7", "10"};
  std::uint32_t m = 4096;
  std::uint16_t k = 1;
};

void run_eval_sweep(const EvalSweepArgs& args) {
  require_power_of_two_m(args.m);
  std::vector<double> epsilons;
  for (const std::string& text : args.epsilons) epsilons.push_back(parse_epsilon(text));
  log_config("eval sweep", {{"corpus", args.common.corpus_dir},
                            {"epsilons", epsilons},
                            {"m", args.m},
                            {"k", args.k},
                            {"runs", args.common.runs},
                            {"jobs_sample", args.common.jobs_sample},
                            {"n", args.common.n},
                            {"seed", args.common.seed},
                            {"threads", args.common.threads},
                            {"correction", args.common.correction ==
                                                   ldpm::CorrectionVariant::JobOnes
                                               ? "job-ones"
                                               : "perturbed-ones"},
                            {"output", args.common.output},
                            {"summary", args.common.summary}});
  const ldpm::StoredCorpus stored = ldpm::load_corpus(args.common.corpus_dir);
  log_warnings(stored.corpus.warnings);

  ldpm::ExperimentConfig base;
  base.m = args.m;
  base.k = args.k;
  base.epsilons = epsilons;
  base.n = args.common.n;
  base.jobs_sample = args.common.jobs_sample;
  base.runs = args.common.runs;
  base.seed = ldpm::Seed{args.common.seed};
  base.correction = args.common.correction;
  base.threads = args.common.threads;

  std::vector<ldpm::ResultRow> rows;
  for (const ldpm::EvalModel model :
       {ldpm::EvalModel::Binary, ldpm::EvalModel::BF, ldpm::EvalModel::BFDP}) {
    ldpm::ExperimentConfig config = base;
    config.model = model;
    std::vector<ldpm::ResultRow> part = ldpm::run_experiment(stored.corpus, config);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  finish_eval(std::move(rows), args.common);
}

struct EvalParamsArgs {
  EvalCommonArgs common;
  std::string epsilon = "ln3";
  std::vector<std::uint32_t> m_list{512, 1024, 2048, 4096};
  std::vector<std::uint16_t> k_list{1, 2, 4, 8};
};

void run_eval_params(const EvalParamsArgs& args) {
  const double epsilon = parse_epsilon(args.epsilon);
  for (const std::uint32_t m : args.m_list) require_power_of_two_m(m);
  log_config("eval params", {{"corpus", args.common.corpus_dir},
                             {"epsilon", epsilon},
                             {"m_list", args.m_list},
                             {"k_list", args.k_list},
                             {"runs", args.common.runs},
                             {"jobs_sample", args.common.jobs_sample},
                             {"n", args.common.n},
                             {"seed", args.common.seed},
                             {"threads", args.common.threads},
                             {"correction", args.common.correction ==
                                                    ldpm::CorrectionVariant::JobOnes
                                                ? "job-ones"
                                                : "perturbed-ones"},
                             {"output", args.common.output},
                             {"summary", args.common.summary}});
  const ldpm::StoredCorpus stored = ldpm::load_corpus(args.common.corpus_dir);
  log_warnings(stored.corpus.warnings);

  std::vector<ldpm::ResultRow> rows;
  for (const std::uint32_t m : args.m_list) {
    for (const std::uint16_t k : args.k_list) {
      ldpm::ExperimentConfig config;
      config.model = ldpm::EvalModel::BFDP;
      config.m = m;
      config.k = k;
      config.epsilons = {epsilon};
      config.n = args.common.n;
      config.jobs_sample = args.common.jobs_sample;
      config.runs = args.common.runs;
      config.seed = ldpm::Seed{args.common.seed};
      config.correction = args.common.correction;
      config.threads = args.common.threads;
      std::vector<ldpm::ResultRow> part = ldpm::run_experiment(stored.corpus, config);
      rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
    }
  }
  finish_eval(std::move(rows), args.common);
}

struct NetsimRunArgs {
  std::uint32_t nodes = 16;
  ldpm::Topology topology = ldpm::Topology::Ring;
  std::uint32_t degree = 4;
  std::uint32_t fanout = 2;
  double churn = 0.0;
  std::uint32_t rounds = 10;
  std::uint64_t seed = 1;
  std::string clusters;
  std::string workload;
  std::string output;
};

void run_netsim_run(const NetsimRunArgs& args) {
  ldpm::SimConfig config;
  config.nodes = args.nodes;
  config.topology = args.topology;
  config.degree = args.degree;
  config.gossip_fanout = args.fanout;
  config.churn_offline_prob = args.churn;
  config.rounds = args.rounds;
  config.seed = ldpm::Seed{args.seed};
  if (!args.clusters.empty()) config.clusters = parse_clusters(args.clusters);
  log_config("netsim run",
             {{"nodes", config.nodes},
              {"topology", config.topology == ldpm::Topology::Ring ? "ring" : "random"},
              {"degree", config.degree},
              {"fanout", config.gossip_fanout},
              {"churn", config.churn_offline_prob},
              {"rounds", config.rounds},
              {"seed", args.seed},
              {"clusters", args.clusters},
              {"workload", args.workload},
              {"output", args.output.empty() ? "-" : args.output}});
  const std::string workload_text =
      args.workload.empty() ? std::string() : read_text_file(args.workload);
  const ordered_json report = ldpm::run_simulation(config, workload_text);
  with_output(args.output, [&](std::ostream& out) { out << report.dump(2) << "\n"; });
}

struct NetsimCidArgs {
  std::string file;
  std::string text;
  bool has_text = false;
};

void run_netsim_cid(const NetsimCidArgs& args) {
  std::vector<std::uint8_t> bytes;
  if (!args.file.empty()) {
    const std::string data = read_text_file(args.file);
    bytes.assign(data.begin(), data.end());
  } else if (args.has_text) {
    bytes.assign(args.text.begin(), args.text.end());
  } else {
    throw ldpm::InvalidInputError("give --file or --text");
  }
  std::cout << ldpm::compute_cid(bytes).hex() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving job matching over noisy keyword filters"};
  app.set_config("--config", "", "Read defaulted flag values from a TOML/INI file");
  app.require_subcommand(1);

  const std::map<std::string, ldpm::ProfileRole> role_names{
      {"job", ldpm::ProfileRole::Job}, {"candidate", ldpm::ProfileRole::Candidate}};
  const std::map<std::string, ldpm::CorrectionVariant> correction_names{
      {"job-ones", ldpm::CorrectionVariant::JobOnes},
      {"perturbed-ones", ldpm::CorrectionVariant::PerturbedCandidateOnes}};
  const std::map<std::string, ldpm::Topology> topology_names{
      {"ring", ldpm::Topology::Ring}, {"random", ldpm::Topology::Random}};

  CLI::App* corpus = app.add_subcommand("corpus", "Create or import job/candidate corpora");
  corpus->require_subcommand(1);

  SynthArgs synth;
  CLI::App* corpus_synth = corpus->add_subcommand("synth", "Generate a synthetic topic corpus");
  corpus_synth->add_option("--jobs", synth.config.jobs, "Total job count")
      ->capture_default_str();
  corpus_synth->add_option("--candidates", synth.config.candidates, "Candidate count")
      ->capture_default_str();
  corpus_synth
      ->add_option("--open-jobs", synth.config.open_jobs, "Jobs held out with no applications")
      ->capture_default_str();
  corpus_synth->add_option("--topics", synth.config.topics, "Latent topic count")
      ->capture_default_str();
  corpus_synth
      ->add_option("--vocab-per-topic", synth.config.vocab_per_topic, "Tokens per topic")
      ->capture_default_str();
  corpus_synth
      ->add_option("--shared-vocab", synth.config.shared_vocab, "Tokens shared by all topics")
      ->capture_default_str();
  corpus_synth
      ->add_option("--keywords-min", synth.config.keywords_per_job.min, "Min keywords per job")
      ->capture_default_str();
  corpus_synth
      ->add_option("--keywords-max", synth.config.keywords_per_job.max, "Max keywords per job")
      ->capture_default_str();
  corpus_synth
      ->add_option("--apps-min", synth.config.applications_per_candidate.min,
                   "Min applications per candidate")
      ->capture_default_str();
  corpus_synth
      ->add_option("--apps-max", synth.config.applications_per_candidate.max,
                   "Max applications per candidate")
      ->capture_default_str();
  corpus_synth->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
  corpus_synth->add_option("--m", synth.m, "Filter length for stored profiles")
      ->capture_default_str();
  corpus_synth->add_option("--k", synth.k, "Hash count for stored profiles")
      ->check(CLI::Range(1, 65535))
      ->capture_default_str();
  corpus_synth->add_option("-o,--output", synth.output, "Corpus output directory")->required();
  corpus_synth->callback([&] { run_corpus_synth(synth); });

  ImportArgs import_args;
  CLI::App* corpus_import =
      corpus->add_subcommand("import", "Import jobs and applications from TSV files");
  corpus_import->add_option("--jobs-tsv", import_args.jobs_tsv,
                            "TSV with columns job_id, title, description, requirements")
      ->required();
  corpus_import
      ->add_option("--applications-tsv", import_args.applications_tsv,
                   "TSV with columns candidate_id, job_id")
      ->required();
  corpus_import->add_option("--m", import_args.m, "Filter length for stored profiles")
      ->capture_default_str();
  corpus_import->add_option("--k", import_args.k, "Hash count for stored profiles")
      ->check(CLI::Range(1, 65535))
      ->capture_default_str();
  corpus_import->add_option("-o,--output", import_args.output, "Corpus output directory")
      ->required();
  corpus_import->callback([&] { run_corpus_import(import_args); });

  CLI::App* profile = app.add_subcommand("profile", "Build and perturb keyword filters");
  profile->require_subcommand(1);

  BuildArgs build;
  CLI::App* profile_build = profile->add_subcommand("build", "Build a filter from keywords");
  profile_build->add_option("--keywords", build.keywords, "Comma-separated keywords")
      ->delimiter(',');
  profile_build->add_option("--keywords-file", build.keywords_file,
                            "File with one keyword per line");
  profile_build->add_option("--m", build.m, "Filter length (power of two)")
      ->capture_default_str();
  profile_build->add_option("--k", build.k, "Hash functions per keyword")
      ->check(CLI::Range(1, 65535))
      ->capture_default_str();
  profile_build->add_option("--role", build.role, "Profile role")
      ->transform(CLI::CheckedTransformer(role_names, CLI::ignore_case))
      ->required();
  profile_build->add_option("-o,--output", build.output, "Profile output file")->required();
  profile_build->callback([&] { run_profile_build(build); });

  PerturbArgs perturb_args;
  CLI::App* profile_perturb =
      profile->add_subcommand("perturb", "Apply randomized response to a stored filter");
  profile_perturb
      ->add_option("--epsilon", perturb_args.epsilon, "Privacy budget (number, ln2 or ln3)")
      ->required();
  profile_perturb->add_option("--k", perturb_args.k,
                              "Hash count the budget is split over (default: the profile's k)");
  profile_perturb->add_option("--seed", perturb_args.seed, "Perturbation seed")
      ->capture_default_str();
  profile_perturb->add_option("-i,--input", perturb_args.input, "Profile to perturb")
      ->required();
  profile_perturb->add_option("-o,--output", perturb_args.output, "Perturbed profile output")
      ->required();
  profile_perturb->callback([&] { run_profile_perturb(perturb_args); });

  CLI::App* recommend = app.add_subcommand("recommend", "Rank jobs or candidates");
  recommend->require_subcommand(1);

  RecommendJobsArgs rec_jobs;
  CLI::App* recommend_jobs =
      recommend->add_subcommand("jobs", "Rank jobs for a candidate profile");
  recommend_jobs->add_option("--corpus", rec_jobs.corpus_dir, "Corpus directory")->required();
  recommend_jobs
      ->add_option("--candidate", rec_jobs.candidate_profile, "Candidate profile file")
      ->required();
  recommend_jobs->add_option("-n,--top", rec_jobs.n, "List length")->capture_default_str();
  CLI::Option* rec_jobs_threshold = recommend_jobs->add_option(
      "--threshold", rec_jobs.threshold, "Drop scores at or below this value");
  recommend_jobs->add_flag("--all-jobs", rec_jobs.all_jobs,
                           "Rank every job, not only the open ones");
  recommend_jobs->add_option("-o,--output", rec_jobs.output, "Output CSV (default stdout)");
  recommend_jobs->callback([&] {
    rec_jobs.has_threshold = rec_jobs_threshold->count() > 0;
    run_recommend_jobs(rec_jobs);
  });

  RecommendCandidatesArgs rec_cands;
  CLI::App* recommend_candidates =
      recommend->add_subcommand("candidates", "Rank candidates for a job");
  recommend_candidates->add_option("--corpus", rec_cands.corpus_dir, "Corpus directory")
      ->required();
  CLI::Option* rec_job_id =
      recommend_candidates->add_option("--job", rec_cands.job_id, "Job id inside the corpus");
  recommend_candidates
      ->add_option("--job-profile", rec_cands.job_profile, "Job profile file (outside corpus)")
      ->excludes(rec_job_id);
  recommend_candidates->add_option(
      "--epsilon", rec_cands.epsilon,
      "Perturb candidate filters at this privacy budget before ranking");
  recommend_candidates->add_option("--seed", rec_cands.seed, "Perturbation master seed")
      ->capture_default_str();
  recommend_candidates->add_option("--correction", rec_cands.correction,
                                   "Ones count used by the de-noising estimator")
      ->transform(CLI::CheckedTransformer(correction_names, CLI::ignore_case))
      ->capture_default_str();
  recommend_candidates->add_option("-n,--top", rec_cands.n, "List length")
      ->capture_default_str();
  CLI::Option* rec_cands_threshold = recommend_candidates->add_option(
      "--threshold", rec_cands.threshold, "Drop scores at or below this value");
  recommend_candidates->add_option("-o,--output", rec_cands.output,
                                   "Output CSV (default stdout)");
  recommend_candidates->callback([&] {
    rec_cands.has_threshold = rec_cands_threshold->count() > 0;
    if (rec_cands.job_id.empty() && rec_cands.job_profile.empty()) {
      throw CLI::RequiredError("--job or --job-profile");
    }
    run_recommend_candidates(rec_cands);
  });

  CLI::App* eval = app.add_subcommand("eval", "Precision experiments over a corpus");
  eval->require_subcommand(1);

  auto add_eval_common = [](CLI::App* cmd, EvalCommonArgs& common,
                            const std::map<std::string, ldpm::CorrectionVariant>& corrections) {
    cmd->add_option("--corpus", common.corpus_dir, "Corpus directory")->required();
    cmd->add_option("--runs", common.runs, "Perturbation repetitions per setting")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    cmd->add_option("--jobs-sample", common.jobs_sample, "Open jobs sampled per experiment")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    cmd->add_option("-n,--top", common.n, "Cut-off for precision and relevant sets")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    cmd->add_option("--seed", common.seed, "Master seed")->capture_default_str();
    cmd->add_option("--threads", common.threads, "Worker threads")
        ->check(CLI::Range(1, 4096))
        ->capture_default_str();
    cmd->add_option("--correction", common.correction,
                    "Ones count used by the de-noising estimator")
        ->transform(CLI::CheckedTransformer(corrections, CLI::ignore_case))
        ->capture_default_str();
    cmd->add_option("-o,--output", common.output, "Results CSV path")->required();
    cmd->add_option("--summary", common.summary, "Also write a per-setting summary CSV here");
  };

  EvalSweepArgs sweep;
  CLI::App* eval_sweep =
      eval->add_subcommand("sweep", "Privacy budget sweep: ground truth vs plain vs noisy");
  add_eval_common(eval_sweep, sweep.common, correction_names);
  eval_sweep
      ->add_option("--epsilons", sweep.epsilons, "Privacy budgets (numbers, ln2, ln3)")
      ->delimiter(',')
      ->capture_default_str();
  eval_sweep->add_option("--m", sweep.m, "Filter length")->capture_default_str();
  eval_sweep->add_option("--k", sweep.k, "Hash functions per keyword")
      ->check(CLI::Range(1, 65535))
      ->capture_default_str();
  eval_sweep->callback([&] { run_eval_sweep(sweep); });

  EvalParamsArgs params_args;
  CLI::App* eval_params =
      eval->add_subcommand("params", "Filter geometry grid at a fixed privacy budget");
  add_eval_common(eval_params, params_args.common, correction_names);
  eval_params->add_option("--epsilon", params_args.epsilon, "Privacy budget")
      ->capture_default_str();
  eval_params->add_option("--m-list", params_args.m_list, "Filter lengths to test")
      ->delimiter(',')
      ->capture_default_str();
  eval_params->add_option("--k-list", params_args.k_list, "Hash counts to test")
      ->delimiter(',')
      ->capture_default_str();
  eval_params->callback([&] { run_eval_params(params_args); });

  CLI::App* netsim = app.add_subcommand("netsim", "Peer-to-peer storage simulation");
  netsim->require_subcommand(1);

  NetsimRunArgs sim;
  CLI::App* netsim_run = netsim->add_subcommand("run", "Run a workload script");
  netsim_run->add_option("--nodes", sim.nodes, "Node count")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  netsim_run->add_option("--topology", sim.topology, "Overlay shape")
      ->transform(CLI::CheckedTransformer(topology_names, CLI::ignore_case))
      ->capture_default_str();
  netsim_run->add_option("--degree", sim.degree, "Target average degree (random topology)")
      ->capture_default_str();
  netsim_run->add_option("--fanout", sim.fanout, "Gossip sends per holder per round")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  netsim_run->add_option("--churn", sim.churn, "Per-node per-round offline probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  netsim_run->add_option("--rounds", sim.rounds, "Round count")->capture_default_str();
  netsim_run->add_option("--seed", sim.seed, "Simulation seed")->capture_default_str();
  netsim_run->add_option("--clusters", sim.clusters,
                         "Replication clusters, e.g. all=0-15 or a=0-3;b=4-7");
  netsim_run->add_option("--workload", sim.workload, "Workload script file (default: none)");
  netsim_run->add_option("-o,--output", sim.output, "Report JSON path (default stdout)");
  netsim_run->callback([&] { run_netsim_run(sim); });

  NetsimCidArgs cid;
  CLI::App* netsim_cid =
      netsim->add_subcommand("cid", "Print the content id of a file or string");
  netsim_cid->add_option("--file", cid.file, "Hash this file's bytes");
  CLI::Option* cid_text = netsim_cid->add_option("--text", cid.text, "Hash this string");
  netsim_cid->callback([&] {
    cid.has_text = cid_text->count() > 0;
    run_netsim_cid(cid);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ldpm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
