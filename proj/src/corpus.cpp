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

#include "ldpmatch/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ldpmatch/errors.hpp"
#include "ldpmatch/rng.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace ldpm {
namespace {

// Fixed English stopword list. Checked in rather than configurable so two
// runs of keyword extraction can never disagree about what was filtered.
const std::set<std::string, std::less<>>& stopword_set() {
  static const std::set<std::string, std::less<>> words = {
      "a",       "about",   "above",  "after",   "again",  "against", "all",    "am",
      "an",      "and",     "any",    "are",     "as",     "at",      "be",     "because",
      "been",    "before",  "being",  "below",   "between", "both",   "but",    "by",
      "can",     "could",   "did",    "do",      "does",   "doing",   "down",   "during",
      "each",    "few",     "for",    "from",    "further", "had",    "has",    "have",
      "having",  "he",      "her",    "here",    "hers",   "herself", "him",    "himself",
      "his",     "how",     "if",     "in",      "into",   "is",      "it",     "its",
      "itself",  "just",    "may",    "me",      "might",  "more",    "most",   "must",
      "my",      "myself",  "no",     "nor",     "not",    "now",     "of",     "off",
      "on",      "once",    "only",   "or",      "other",  "our",     "ours",   "ourselves",
      "out",     "over",    "own",    "same",    "shall",  "she",     "should", "so",
      "some",    "such",    "than",   "that",    "the",    "their",   "theirs", "them",
      "themselves", "then", "there",  "these",   "they",   "this",    "those",  "through",
      "to",      "too",     "under",  "until",   "up",     "very",    "was",    "we",
      "were",    "what",    "when",   "where",   "which",  "while",   "who",    "whom",
      "why",     "will",    "with",   "would",   "you",    "your",    "yours",  "yourself",
      "yourselves"};
  return words;
}

std::uint32_t range_width(const CountRange& r, const char* what) {
  if (r.min > r.max) {
    throw ConfigError(std::string(what) + " range is empty (min > max)");
  }
  return r.max - r.min + 1;
}

// Draws `count` distinct values from [0, population) by partial
// Fisher-Yates.
std::vector<std::uint32_t> sample_distinct(rng::SplitMix& gen, std::uint32_t population,
                                           std::uint32_t count) {
  std::vector<std::uint32_t> pool(population);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t j = i + static_cast<std::uint32_t>(gen.below(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

std::string padded_id(const char* prefix, std::uint32_t index, std::uint32_t total) {
  std::uint32_t width = 1;
  for (std::uint32_t rest = total; rest >= 10; rest /= 10) ++width;
  std::string digits = std::to_string(index);
  return prefix + std::string(width - std::min<std::size_t>(width, digits.size()), '0') + digits;
}

struct TsvTable {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line number, fields)

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError(path + ": missing required column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

TsvTable read_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  TsvTable table;
  table.path = path;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.header.empty()) {
      table.header = split_tabs(line);
      continue;
    }
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != table.header.size()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    table.rows.emplace_back(line_no, std::move(fields));
  }
  if (table.header.empty()) throw ParseError(path + ": empty file, expected a header row");
  return table;
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path);
  return bytes;
}

ordered_json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

bool is_stopword(std::string_view token) { return stopword_set().count(token) > 0; }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2 && !is_stopword(current)) tokens.push_back(current);
    current.clear();
  };
  for (char ch : text) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isalnum(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::map<std::string, KeywordSet> extract_keywords(const std::vector<JobDocument>& documents,
                                                   std::vector<std::string>* warnings) {
  if (documents.empty()) throw InvalidInputError("document list is empty");
  std::vector<std::map<std::string, std::uint32_t>> term_counts;
  term_counts.reserve(documents.size());
  std::map<std::string, std::uint32_t> df;
  std::set<std::string> seen_ids;
  for (const JobDocument& doc : documents) {
    if (doc.job_id.empty()) throw InvalidInputError("document with empty job_id");
    if (!seen_ids.insert(doc.job_id).second) {
      throw InvalidInputError("duplicate job_id: " + doc.job_id);
    }
    if (doc.title.empty() && doc.description.empty() && doc.requirements.empty()) {
      throw InvalidInputError("job " + doc.job_id + " has no text in any field");
    }
    std::map<std::string, std::uint32_t> counts;
    for (const std::string& field : {doc.title, doc.description, doc.requirements}) {
      for (std::string& token : tokenize(field)) ++counts[std::move(token)];
    }
    for (const auto& [token, unused] : counts) ++df[token];
    term_counts.push_back(std::move(counts));
  }

  const double n_docs = static_cast<double>(documents.size());
  std::map<std::string, KeywordSet> out;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    KeywordSet keywords;
    for (const auto& [token, tf] : term_counts[d]) {
      const double score = static_cast<double>(tf) * std::log(n_docs / df.at(token));
      if (score > 0.0) keywords.add(token);
    }
    if (keywords.empty() && warnings) {
      warnings->push_back("job " + documents[d].job_id +
                          ": no keywords survived TF-IDF extraction");
    }
    out.emplace(documents[d].job_id, std::move(keywords));
  }
  return out;
}

void validate_corpus(const Corpus& corpus) {
  std::set<std::string> applied;
  for (const auto& [candidate_id, jobs] : corpus.applications) {
    if (candidate_id.empty()) throw InvalidInputError("empty candidate id");
    if (jobs.empty()) {
      throw InvalidInputError("candidate " + candidate_id + " has no applications");
    }
    std::set<std::string> own;
    for (const std::string& job_id : jobs) {
      if (!corpus.jobs.count(job_id)) {
        throw InvalidInputError("candidate " + candidate_id + " references unknown job " +
                                job_id);
      }
      if (!own.insert(job_id).second) {
        throw InvalidInputError("candidate " + candidate_id + " applies twice to job " + job_id);
      }
      applied.insert(job_id);
    }
  }
  std::set<std::string> open_seen;
  for (const std::string& job_id : corpus.open_jobs) {
    if (!corpus.jobs.count(job_id)) {
      throw InvalidInputError("open job " + job_id + " is not in the job table");
    }
    if (!open_seen.insert(job_id).second) {
      throw InvalidInputError("open job " + job_id + " listed twice");
    }
    if (applied.count(job_id)) {
      throw InvalidInputError("job " + job_id + " is both open and applied to");
    }
  }
}

Corpus generate_synthetic(const SynthConfig& config, SynthStats* stats) {
  if (config.topics < 1) throw ConfigError("topics must be positive");
  if (config.vocab_per_topic < 1) throw ConfigError("vocab_per_topic must be positive");
  if (config.jobs < 1 || config.candidates < 1 || config.open_jobs < 1) {
    throw ConfigError("jobs, candidates and open_jobs must be positive");
  }
  if (config.open_jobs >= config.jobs) {
    throw ConfigError("open_jobs must leave at least one job to apply to");
  }
  const std::uint32_t kw_width = range_width(config.keywords_per_job, "keywords_per_job");
  const std::uint32_t app_width =
      range_width(config.applications_per_candidate, "applications_per_candidate");
  if (config.keywords_per_job.min < 2) {
    throw ConfigError("keywords_per_job.min must be at least 2");
  }
  if (config.applications_per_candidate.min < 5) {
    throw ConfigError("applications_per_candidate.min must be at least 5");
  }
  const std::uint32_t vocab_total = config.vocab_per_topic + config.shared_vocab;
  if (config.keywords_per_job.max > vocab_total) {
    throw ConfigError("keywords_per_job.max exceeds the per-topic vocabulary (" +
                      std::to_string(vocab_total) + " tokens)");
  }

  const std::uint64_t master = config.seed.value;
  Corpus corpus;

  // Hold out the open set first so applications can only target the rest.
  std::vector<bool> is_open(config.jobs, false);
  {
    rng::SplitMix gen(rng::derive_seed(master, "open-jobs"));
    for (std::uint32_t idx : sample_distinct(gen, config.jobs, config.open_jobs)) {
      is_open[idx] = true;
    }
  }

  std::vector<std::vector<std::string>> applyable_by_topic(config.topics);
  std::uint64_t keyword_total = 0;
  std::uint32_t keyword_min = 0;
  std::uint32_t keyword_max = 0;
  for (std::uint32_t j = 0; j < config.jobs; ++j) {
    const std::string job_id = padded_id("job", j, config.jobs);
    rng::SplitMix gen(rng::derive_seed(master, "job-keywords", j));
    const std::uint32_t topic = static_cast<std::uint32_t>(gen.below(config.topics));
    const std::uint32_t count =
        config.keywords_per_job.min + static_cast<std::uint32_t>(gen.below(kw_width));
    KeywordSet keywords;
    for (std::uint32_t token_idx : sample_distinct(gen, vocab_total, count)) {
      if (token_idx < config.vocab_per_topic) {
        keywords.add("t" + std::to_string(topic) + "w" + std::to_string(token_idx));
      } else {
        keywords.add("sharedw" + std::to_string(token_idx - config.vocab_per_topic));
      }
    }
    keyword_total += count;
    keyword_min = j == 0 ? count : std::min(keyword_min, count);
    keyword_max = std::max(keyword_max, count);
    if (is_open[j]) {
      corpus.open_jobs.push_back(job_id);
    } else {
      applyable_by_topic[topic].push_back(job_id);
    }
    corpus.jobs.emplace(job_id, std::move(keywords));
  }
  std::sort(corpus.open_jobs.begin(), corpus.open_jobs.end());

  for (std::uint32_t c = 0; c < config.candidates; ++c) {
    const std::string candidate_id = padded_id("cand", c, config.candidates);
    rng::SplitMix gen(rng::derive_seed(master, "candidate", c));
    const std::uint32_t topic = static_cast<std::uint32_t>(gen.below(config.topics));
    const std::uint32_t wanted =
        config.applications_per_candidate.min + static_cast<std::uint32_t>(gen.below(app_width));
    const std::vector<std::string>& pool = applyable_by_topic[topic];
    if (pool.size() < wanted) {
      throw ConfigError("topic " + std::to_string(topic) + " has only " +
                        std::to_string(pool.size()) + " non-open jobs, candidate needs " +
                        std::to_string(wanted));
    }
    std::vector<std::string> chosen;
    for (std::uint32_t idx :
         sample_distinct(gen, static_cast<std::uint32_t>(pool.size()), wanted)) {
      chosen.push_back(pool[idx]);
    }
    std::sort(chosen.begin(), chosen.end());
    corpus.applications.emplace(candidate_id, std::move(chosen));
  }

  if (stats) {
    stats->mean_keywords_per_job =
        static_cast<double>(keyword_total) / static_cast<double>(config.jobs);
    stats->min_keywords_per_job = keyword_min;
    stats->max_keywords_per_job = keyword_max;
  }
  validate_corpus(corpus);
  return corpus;
}

Corpus import_tabular(const std::string& jobs_path, const std::string& applications_path) {
  const TsvTable jobs_table = read_tsv(jobs_path);
  const std::size_t col_job_id = jobs_table.column("job_id");
  const std::size_t col_title = jobs_table.column("title");
  const std::size_t col_description = jobs_table.column("description");
  const std::size_t col_requirements = jobs_table.column("requirements");

  std::vector<JobDocument> documents;
  std::set<std::string> job_ids;
  for (const auto& [line_no, fields] : jobs_table.rows) {
    JobDocument doc;
    doc.job_id = fields[col_job_id];
    doc.title = fields[col_title];
    doc.description = fields[col_description];
    doc.requirements = fields[col_requirements];
    const std::string where = jobs_path + ":" + std::to_string(line_no);
    if (doc.job_id.empty()) throw ParseError(where + ": empty job_id");
    if (!job_ids.insert(doc.job_id).second) {
      throw ParseError(where + ": duplicate job_id " + doc.job_id);
    }
    if (doc.title.empty() && doc.description.empty() && doc.requirements.empty()) {
      throw ParseError(where + ": job " + doc.job_id + " has no text in any field");
    }
    documents.push_back(std::move(doc));
  }
  if (documents.empty()) throw ParseError(jobs_path + ": no job rows");

  const TsvTable apps_table = read_tsv(applications_path);
  const std::size_t col_candidate = apps_table.column("candidate_id");
  const std::size_t col_applied_job = apps_table.column("job_id");

  std::map<std::string, std::vector<std::string>> raw_applications;
  std::set<std::pair<std::string, std::string>> seen_pairs;
  std::set<std::string> referenced_jobs;
  for (const auto& [line_no, fields] : apps_table.rows) {
    const std::string& candidate_id = fields[col_candidate];
    const std::string& job_id = fields[col_applied_job];
    const std::string where = applications_path + ":" + std::to_string(line_no);
    if (candidate_id.empty()) throw ParseError(where + ": empty candidate_id");
    if (job_id.empty()) throw ParseError(where + ": empty job_id");
    if (!job_ids.count(job_id)) {
      throw ParseError(where + ": application references unknown job " + job_id);
    }
    if (!seen_pairs.insert({candidate_id, job_id}).second) {
      throw ParseError(where + ": candidate " + candidate_id + " applies twice to job " +
                       job_id);
    }
    referenced_jobs.insert(job_id);
    raw_applications[candidate_id].push_back(job_id);
  }

  Corpus corpus;
  corpus.jobs = extract_keywords(documents, &corpus.warnings);
  for (auto& [candidate_id, applied] : raw_applications) {
    if (applied.size() < 5) {
      corpus.warnings.push_back("candidate " + candidate_id + " dropped: " +
                                std::to_string(applied.size()) + " applications, need 5");
      continue;
    }
    std::sort(applied.begin(), applied.end());
    corpus.applications.emplace(candidate_id, std::move(applied));
  }
  for (const auto& [job_id, unused] : corpus.jobs) {
    if (!referenced_jobs.count(job_id)) corpus.open_jobs.push_back(job_id);
  }
  validate_corpus(corpus);
  return corpus;
}

BloomProfile read_profile_file(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_binary_file(path);
  try {
    return BloomProfile::deserialize(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_profile_file(const BloomProfile& profile, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::vector<std::uint8_t> bytes = profile.serialize();
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed on " + path);
}

void save_corpus(const Corpus& corpus, const std::string& dir, std::uint32_t m,
                 std::uint16_t k) {
  validate_corpus(corpus);
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "jobs", ec);
  if (ec) throw IoError("cannot create " + dir + "/jobs: " + ec.message());

  const std::set<std::string> open_set(corpus.open_jobs.begin(), corpus.open_jobs.end());
  ordered_json index;
  index["format"] = "ldpmatch-corpus";
  index["version"] = 1;
  index["m"] = m;
  index["k"] = k;

  ordered_json jobs_json = ordered_json::array();
  std::size_t job_ordinal = 0;
  for (const auto& [job_id, keywords] : corpus.jobs) {
    const std::string rel = "jobs/" + std::to_string(job_ordinal++) + ".profile";
    write_profile_file(BloomProfile::from_keywords(keywords, m, k, ProfileRole::Job),
                       (fs::path(dir) / rel).string());
    ordered_json entry;
    entry["id"] = job_id;
    entry["role"] = "job";
    entry["file"] = rel;
    entry["open"] = open_set.count(job_id) > 0;
    entry["keywords"] = std::vector<std::string>(keywords.begin(), keywords.end());
    jobs_json.push_back(std::move(entry));
  }
  index["jobs"] = std::move(jobs_json);

  ordered_json candidates_json = ordered_json::array();
  std::size_t candidate_ordinal = 0;
  for (const auto& [candidate_id, applied] : corpus.applications) {
    const std::string cdir = "candidates/" + std::to_string(candidate_ordinal++);
    fs::create_directories(fs::path(dir) / cdir, ec);
    if (ec) throw IoError("cannot create " + dir + "/" + cdir + ": " + ec.message());
    ordered_json entry;
    entry["id"] = candidate_id;
    entry["role"] = "candidate";
    ordered_json applied_json = ordered_json::array();
    std::size_t applied_ordinal = 0;
    for (const std::string& job_id : applied) {
      const std::string rel = cdir + "/" + std::to_string(applied_ordinal++) + ".profile";
      write_profile_file(
          BloomProfile::from_keywords(corpus.jobs.at(job_id), m, k, ProfileRole::Candidate),
          (fs::path(dir) / rel).string());
      ordered_json app;
      app["job_id"] = job_id;
      app["file"] = rel;
      applied_json.push_back(std::move(app));
    }
    entry["applied"] = std::move(applied_json);
    candidates_json.push_back(std::move(entry));
  }
  index["candidates"] = std::move(candidates_json);
  index["warnings"] = corpus.warnings;

  std::ofstream out(fs::path(dir) / "index.json");
  if (!out) throw IoError("cannot write " + dir + "/index.json");
  out << index.dump(2) << '\n';
  if (!out) throw IoError("write failed on " + dir + "/index.json");
}

StoredCorpus load_corpus(const std::string& dir) {
  const std::string index_path = (fs::path(dir) / "index.json").string();
  const ordered_json index = parse_json_file(index_path);
  try {
    if (index.at("format") != "ldpmatch-corpus" || index.at("version") != 1) {
      throw ParseError(index_path + ": not a version-1 corpus index");
    }
    StoredCorpus stored;
    stored.root = dir;
    stored.m = index.at("m").get<std::uint32_t>();
    stored.k = index.at("k").get<std::uint16_t>();
    for (const auto& entry : index.at("jobs")) {
      const std::string job_id = entry.at("id").get<std::string>();
      KeywordSet keywords;
      for (const auto& kw : entry.at("keywords")) keywords.add(kw.get<std::string>());
      stored.corpus.jobs.emplace(job_id, std::move(keywords));
      stored.job_files[job_id] = entry.at("file").get<std::string>();
      if (entry.at("open").get<bool>()) stored.corpus.open_jobs.push_back(job_id);
    }
    std::sort(stored.corpus.open_jobs.begin(), stored.corpus.open_jobs.end());
    for (const auto& entry : index.at("candidates")) {
      const std::string candidate_id = entry.at("id").get<std::string>();
      std::vector<std::string> applied;
      std::vector<std::pair<std::string, std::string>> files;
      for (const auto& app : entry.at("applied")) {
        applied.push_back(app.at("job_id").get<std::string>());
        files.emplace_back(app.at("job_id").get<std::string>(),
                           app.at("file").get<std::string>());
      }
      stored.corpus.applications.emplace(candidate_id, std::move(applied));
      stored.candidate_files.emplace(candidate_id, std::move(files));
    }
    if (index.contains("warnings")) {
      for (const auto& w : index.at("warnings")) {
        stored.corpus.warnings.push_back(w.get<std::string>());
      }
    }
    validate_corpus(stored.corpus);
    return stored;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(index_path + ": " + e.what());
  }
}

}  // namespace ldpm
