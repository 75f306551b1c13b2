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

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "ldpmatch/corpus.hpp"
#include "ldpmatch/errors.hpp"
#include "ldpmatch/eval.hpp"
#include "ldpmatch/recommend.hpp"
#include "ldpmatch/rng.hpp"

using namespace ldpm;
namespace fs = std::filesystem;

namespace {

RankedList ranking(const std::vector<std::string>& ids) {
  RankedList list;
  list.n = ids.size();
  double score = 1.0;
  for (const std::string& id : ids) {
    list.entries.push_back({id, SimilarityScore::from_raw(score)});
    score -= 0.001;
  }
  return list;
}

SynthConfig tiny_config() {
  SynthConfig config;
  config.topics = 3;
  config.vocab_per_topic = 60;
  config.shared_vocab = 30;
  config.jobs = 60;
  config.candidates = 6;
  config.open_jobs = 12;
  config.keywords_per_job = {8, 20};
  config.applications_per_candidate = {5, 7};
  config.seed = Seed{5};
  return config;
}

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("ldpmatch-eval-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) +
            "-" + name);
  }
  ~TempFile() {
    std::error_code ec;
    fs::remove(path, ec);
  }
  std::string read() const {
    std::ifstream in(path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  }
};

bool rows_equal(const ResultRow& a, const ResultRow& b) {
  return a.model == b.model && a.m == b.m && a.k == b.k && a.epsilon == b.epsilon &&
         a.job_id == b.job_id && a.run == b.run && a.precision_at_n == b.precision_at_n &&
         a.average_precision == b.average_precision;
}

}  // namespace

TEST_CASE("precision counts relevant ids in the prefix") {
  const auto list = ranking({"a", "x", "y", "b", "c"});
  const std::set<std::string> relevant = {"a", "b", "c", "q", "r"};

  // Hits at ranks 1, 4 and 5 of n=5.
  CHECK(precision_at_n(list, relevant, 5) == 0.6);
  CHECK(average_precision(list, relevant, 5) == 0.7);
}

TEST_CASE("perfect rankings score exactly one") {
  for (std::size_t size : {1u, 2u, 3u, 5u, 6u, 7u, 9u, 11u, 20u, 37u}) {
    std::vector<std::string> ids;
    std::set<std::string> relevant;
    for (std::size_t i = 0; i < size; ++i) {
      ids.push_back("id-" + std::to_string(i));
      relevant.insert(ids.back());
    }
    const auto list = ranking(ids);
    CHECK(precision_at_n(list, relevant, size) == 1.0);
    CHECK(average_precision(list, relevant, size) == 1.0);
  }
}

TEST_CASE("empty overlap scores zero") {
  const auto list = ranking({"x", "y", "z"});
  const std::set<std::string> relevant = {"a", "b", "c"};
  CHECK(precision_at_n(list, relevant, 3) == 0.0);
  CHECK(average_precision(list, relevant, 3) == 0.0);
}

TEST_CASE("average precision is order-sensitive, precision is not") {
  const std::set<std::string> relevant = {"a", "b"};
  const auto front = ranking({"a", "b", "x", "y"});
  const auto back = ranking({"x", "y", "a", "b"});

  CHECK(precision_at_n(front, relevant, 4) == precision_at_n(back, relevant, 4));
  CHECK(average_precision(front, relevant, 4) == 1.0);
  // Hits at ranks 3 and 4: (1/3 + 2/4) / 2.
  CHECK(average_precision(back, relevant, 4) ==
        doctest::Approx((1.0 / 3.0 + 0.5) / 2.0).epsilon(1e-15));
  CHECK(average_precision(back, relevant, 4) < average_precision(front, relevant, 4));
}

TEST_CASE("ranks beyond n are invisible") {
  const std::set<std::string> relevant = {"a", "b"};
  const auto list = ranking({"a", "x", "y", "b"});
  CHECK(precision_at_n(list, relevant, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(average_precision(list, relevant, 3) == 1.0);  // only the rank-1 hit counts
}

TEST_CASE("metrics stay in range on random input") {
  rng::SplitMix gen(1234);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> ids;
    const std::size_t len = 1 + gen.below(12);
    for (std::size_t i = 0; i < len; ++i) {
      ids.push_back("id-" + std::to_string(gen.below(20)));
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::set<std::string> relevant;
    const std::size_t picks = 1 + gen.below(12);
    for (std::size_t i = 0; i < picks; ++i) relevant.insert("id-" + std::to_string(gen.below(20)));

    const std::size_t n = 1 + gen.below(10);
    const auto list = ranking(ids);
    std::vector<std::string> warnings;
    const double precision = precision_at_n(list, relevant, n, &warnings);
    const double ap = average_precision(list, relevant, n, &warnings);
    CHECK(precision >= 0.0);
    CHECK(precision <= 1.0);
    CHECK(ap >= 0.0);
    CHECK(ap <= 1.0);
  }
}

TEST_CASE("short lists keep n as the denominator and warn") {
  const auto list = ranking({"a", "b"});
  const std::set<std::string> relevant = {"a", "b", "c", "d", "e"};
  std::vector<std::string> warnings;
  CHECK(precision_at_n(list, relevant, 5, &warnings) == doctest::Approx(0.4));
  CHECK(warnings.size() == 1);
  CHECK(average_precision(list, relevant, 5, &warnings) == 1.0);
  CHECK(warnings.size() == 2);
}

TEST_CASE("metric argument validation") {
  const auto list = ranking({"a"});
  CHECK_THROWS_AS(precision_at_n(list, {"a"}, 0), InvalidInputError);
  CHECK_THROWS_AS(average_precision(list, {"a"}, 0), InvalidInputError);
  CHECK(average_precision(list, {}, 1) == 0.0);  // empty relevant set: no hits
}

TEST_CASE("binary vector model cosine") {
  Corpus corpus;
  KeywordSet a, b, c;
  a.add("python");
  a.add("pandas");
  b.add("python");
  b.add("spark");
  c.add("java");
  c.add("spring");
  corpus.jobs = {{"a", a}, {"b", b}, {"c", c}};

  const BinaryVectorModel model(corpus);
  CHECK(model.vocabulary().size() == 5);
  CHECK(std::is_sorted(model.vocabulary().begin(), model.vocabulary().end()));

  CHECK(model.job_cosine("a", "a") == 1.0);
  CHECK(model.job_cosine("a", "c") == 0.0);
  CHECK(model.job_cosine("a", "b") == doctest::Approx(0.5));  // 1 shared of 2x2
  CHECK(model.job_cosine("a", "b") == model.job_cosine("b", "a"));
  CHECK_THROWS_AS(model.job_cosine("a", "zzz"), InvalidInputError);
}

TEST_CASE("binary vector model ranks by mean cosine") {
  Corpus corpus;
  KeywordSet target, close_kw, far_kw;
  target.add("python");
  target.add("pandas");
  close_kw.add("python");
  close_kw.add("pandas");
  far_kw.add("java");
  far_kw.add("spring");
  corpus.jobs = {{"open", target}, {"near", close_kw}, {"far", far_kw}};
  corpus.applications = {{"alice", {"near"}}, {"bob", {"far"}}};
  corpus.open_jobs = {"open"};

  const BinaryVectorModel model(corpus);
  const auto ranked = model.rank_candidates(corpus, "open", 2);
  REQUIRE(ranked.entries.size() == 2);
  CHECK(ranked.entries[0].id == "alice");
  CHECK(ranked.entries[0].score.value == 1.0);
  CHECK(ranked.entries[1].id == "bob");
  CHECK(ranked.entries[1].score.value == 0.0);
}

TEST_CASE("binary model scores itself perfectly") {
  const Corpus corpus = generate_synthetic(tiny_config());
  ExperimentConfig config;
  config.model = EvalModel::Binary;
  config.n = 3;
  config.jobs_sample = 6;
  config.runs = 2;
  config.seed = Seed{17};

  const auto rows = run_experiment(corpus, config);
  REQUIRE(rows.size() == 12);  // 6 jobs x 2 runs
  for (const ResultRow& row : rows) {
    CHECK(row.model == "binary");
    CHECK(row.m == 0);
    CHECK(row.k == 0);
    CHECK(row.epsilon == 0.0);
    CHECK(row.precision_at_n == 1.0);
    CHECK(row.average_precision == 1.0);
  }
}

TEST_CASE("degenerate epsilon reproduces the plain filter model") {
  const Corpus corpus = generate_synthetic(tiny_config());

  ExperimentConfig bf;
  bf.model = EvalModel::BF;
  bf.m = 512;
  bf.k = 1;
  bf.n = 3;
  bf.jobs_sample = 5;
  bf.runs = 2;
  bf.seed = Seed{23};

  auto bfdp = bf;
  bfdp.model = EvalModel::BFDP;
  bfdp.epsilons = {50.0};

  const auto bf_rows = run_experiment(corpus, bf);
  const auto bfdp_rows = run_experiment(corpus, bfdp);
  REQUIRE(bf_rows.size() == bfdp_rows.size());
  for (std::size_t i = 0; i < bf_rows.size(); ++i) {
    CHECK(bf_rows[i].job_id == bfdp_rows[i].job_id);
    CHECK(bf_rows[i].run == bfdp_rows[i].run);
    CHECK(std::abs(bf_rows[i].precision_at_n - bfdp_rows[i].precision_at_n) <= 0.01);
    CHECK(std::abs(bf_rows[i].average_precision - bfdp_rows[i].average_precision) <= 0.01);
  }
}

TEST_CASE("experiments are deterministic") {
  const Corpus corpus = generate_synthetic(tiny_config());
  ExperimentConfig config;
  config.model = EvalModel::BFDP;
  config.m = 256;
  config.k = 1;
  config.epsilons = {std::log(3.0), 4.0};
  config.n = 3;
  config.jobs_sample = 4;
  config.runs = 2;
  config.seed = Seed{29};

  const auto first = run_experiment(corpus, config);
  const auto second = run_experiment(corpus, config);
  REQUIRE(first.size() == second.size());
  REQUIRE(first.size() == 16);  // 2 epsilons x 4 jobs x 2 runs
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(rows_equal(first[i], second[i]));
  }

  auto parallel = config;
  parallel.threads = 4;
  const auto threaded = run_experiment(corpus, parallel);
  REQUIRE(threaded.size() == first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(rows_equal(first[i], threaded[i]));
  }

  auto reseeded = config;
  reseeded.seed = Seed{30};
  const auto other = run_experiment(corpus, reseeded);
  bool any_difference = false;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (!rows_equal(first[i], other[i])) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("result rows come out sorted") {
  const Corpus corpus = generate_synthetic(tiny_config());
  ExperimentConfig config;
  config.model = EvalModel::BFDP;
  config.m = 256;
  config.k = 1;
  config.epsilons = {4.0, std::log(3.0)};  // deliberately unsorted
  config.n = 3;
  config.jobs_sample = 3;
  config.runs = 2;
  config.seed = Seed{31};

  const auto rows = run_experiment(corpus, config);
  auto key = [](const ResultRow& row) {
    return std::make_tuple(row.model, row.m, row.k, row.epsilon, row.job_id, row.run);
  };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(key(rows[i - 1]) < key(rows[i]));
  }
}

TEST_CASE("experiment configuration validation") {
  const Corpus corpus = generate_synthetic(tiny_config());

  ExperimentConfig config;
  config.model = EvalModel::BFDP;
  config.epsilons = {};
  CHECK_THROWS_AS(run_experiment(corpus, config), ConfigError);

  config.epsilons = {1.0};
  config.jobs_sample = 5000;  // corpus has only 12 open jobs
  CHECK_THROWS_AS(run_experiment(corpus, config), ConfigError);

  config.jobs_sample = 0;
  CHECK_THROWS_AS(run_experiment(corpus, config), ConfigError);

  config.jobs_sample = 4;
  config.runs = 0;
  CHECK_THROWS_AS(run_experiment(corpus, config), ConfigError);

  config.runs = 1;
  config.n = 0;
  CHECK_THROWS_AS(run_experiment(corpus, config), ConfigError);
}

TEST_CASE("results csv has the documented shape") {
  std::vector<ResultRow> rows(2);
  rows[0] = {"bf", 4096, 1, 0.0, "job-7", 0, 0.25, 0.5};
  rows[1] = {"bfdp", 4096, 1, 4.0, "job-7", 1, 1.0, 1.0};

  TempFile file("results.csv");
  write_results_csv(rows, file.path.string());
  CHECK(file.read() ==
        "model,m,k,epsilon,job_id,run,precision_at_n,average_precision\n"
        "bf,4096,1,0,job-7,0,0.25,0.5\n"
        "bfdp,4096,1,4,job-7,1,1,1\n");
}

TEST_CASE("summary csv aggregates per configuration") {
  std::vector<ResultRow> rows(4);
  rows[0] = {"bf", 512, 1, 0.0, "a", 0, 0.5, 0.25};
  rows[1] = {"bf", 512, 1, 0.0, "a", 1, 1.0, 0.75};
  rows[2] = {"bfdp", 512, 1, 2.0, "a", 0, 0.25, 0.25};
  rows[3] = {"bfdp", 512, 1, 2.0, "a", 1, 0.25, 0.25};

  TempFile file("summary.csv");
  write_summary_csv(rows, file.path.string());
  const std::string text = file.read();

  CHECK(text.find("model,m,k,epsilon,rows,mean_precision_at_n,stddev_precision_at_n,"
                  "mean_average_precision,stddev_average_precision\n") == 0);
  // mean(0.5, 1.0) = 0.75, sample stddev = sqrt(2 * 0.25^2) = 0.35355...
  CHECK(text.find("bf,512,1,0,2,0.75,0.3535533905932738,0.5,0.3535533905932738") !=
        std::string::npos);
  CHECK(text.find("bfdp,512,1,2,2,0.25,0,0.25,0") != std::string::npos);
}

TEST_CASE("doubles render in shortest round-trip form") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::log(3.0)) == "1.0986122886681098");
}
