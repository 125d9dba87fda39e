#include <doctest.h>
#include <json.hpp>

#include <sstream>

#include "commands.hpp"
#include "fixtures.hpp"
#include "revpred/corpus.hpp"

using namespace revpred;
using revpred::testing::dataset;
using revpred::testing::read_file;
using revpred::testing::review;
using revpred::testing::snap_record;
using revpred::testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "revpred");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string line_with(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(key, 0) == 0) return line;
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("stats on a three-record file") {
    TempDir dir("cli");
    const auto path = dir.write("three.txt", snap_record("B1", "U1", "5.0", "one two three") +
                                                 snap_record("B2", "U1", "4.0", "four five") +
                                                 snap_record("B1", "U2", "1.0", "six"));
    const Run r = run({"stats", path.string()});
    CHECK(r.code == 0);
    CHECK(line_with(r.out, "Number of reviews").find(" 3") != std::string::npos);
    CHECK(line_with(r.out, "Number of users").find(" 2") != std::string::npos);
    CHECK(line_with(r.out, "Median words").find(" 2") != std::string::npos);
    CHECK(r.err.empty());
  }

  TEST_CASE("stats on a missing file") {
    const Run r = run({"stats", "/no/such/corpus.txt"});
    CHECK(r.code == cli::kDataError);
    CHECK(r.err.find("/no/such/corpus.txt") != std::string::npos);
  }

  TEST_CASE("stats counts malformed records") {
    TempDir dir("cli");
    const auto path = dir.write("bad.txt", snap_record("B1", "U1", "5.0", "ok") +
                                               snap_record("B2", "U2", "4.5", "bad score") +
                                               snap_record("B3", "U3", "2.0", "ok"));
    const Run r = run({"stats", path.string()});
    CHECK(r.code == 0);
    CHECK(line_with(r.out, "Number of reviews").find(" 2") != std::string::npos);
    CHECK(r.err.find("warning: 1 malformed") != std::string::npos);
  }

  TEST_CASE("prepare writes splits and a manifest") {
    TempDir dir("cli");
    save_dataset(dir / "p.ndjson", dataset({review("u1", "i1", 5, "a"), review("u1", "i2", 4, "b"),
                                            review("u2", "i1", 3, "c"), review("u2", "i2", 2, "d"),
                                            review("u3", "i1", 1, "e")}));
    const Run r = run({"prepare", "--dataset", (dir / "p.ndjson").string(), "--prune-k", "2", "-o",
                       (dir / "out").string()});
    REQUIRE(r.code == 0);
    const auto manifest = nlohmann::json::parse(read_file(dir / "out" / "manifest.json"));
    CHECK(manifest["reviews"]["loaded"] == 5);
    CHECK(manifest["reviews"]["after_prune"] == 4);
    CHECK(manifest["prune_k"] == 2);
    CHECK(load_dataset(dir / "out" / "train.ndjson").size() == 3);
    CHECK(load_dataset(dir / "out" / "test.ndjson").size() == 1);
  }

  TEST_CASE("prepare splits 10 reviews 8/2 and is idempotent") {
    TempDir dir("cli");
    std::vector<Review> ten;
    for (int k = 0; k < 10; ++k) ten.push_back(review("u" + std::to_string(k), "i", 4, "t", k));
    save_dataset(dir / "ten.ndjson", dataset(ten));
    const std::vector<std::string> args = {"prepare", "--dataset", (dir / "ten.ndjson").string(),
                                           "--prune-k", "1", "--train-fraction", "0.8", "-o",
                                           (dir / "out").string()};
    const Run first = run(args);
    REQUIRE(first.code == 0);
    CHECK(load_dataset(dir / "out" / "train.ndjson").size() == 8);
    const std::string manifest = read_file(dir / "out" / "manifest.json");
    const std::string train = read_file(dir / "out" / "train.ndjson");
    const Run second = run(args);
    CHECK(second.out == first.out);
    CHECK(line_with(first.out, "manifest:").find("hash") != std::string::npos);
    CHECK(read_file(dir / "out" / "manifest.json") == manifest);
    CHECK(read_file(dir / "out" / "train.ndjson") == train);
  }

  TEST_CASE("prepare surfaces an infeasible sample with context") {
    TempDir dir("cli");
    std::vector<Review> ten;
    for (int k = 0; k < 10; ++k) ten.push_back(review("u" + std::to_string(k), "i", 5, "t", k));
    save_dataset(dir / "ten.ndjson", dataset(ten));
    const Run r = run({"prepare", "--dataset", (dir / "ten.ndjson").string(), "--prune-k", "1",
                       "--sample-n", "5", "--distribution", "balanced", "-o", (dir / "out").string()});
    CHECK(r.code == cli::kDataError);
    CHECK(r.err.find("sample:") != std::string::npos);
    CHECK(r.err.find("stars") != std::string::npos);
  }

  TEST_CASE("evaluate with and without normalization") {
    TempDir dir("cli");
    std::vector<Review> reviews;
    static const char* const kTexts[] = {"Great plot!!", "dull, DULL plot", "great cast 10/10",
                                         "slow start...", "the score was great", "boring cast"};
    for (int k = 0; k < 80; ++k) {
      reviews.push_back(review("u" + std::to_string(k % 9), "i" + std::to_string(k % 11), 1 + k * 7 % 5,
                               kTexts[k % 6], k));
    }
    save_dataset(dir / "d.ndjson", dataset(reviews));
    const Run r = run({"evaluate", "--dataset", (dir / "d.ndjson").string(), "--prune-k", "1",
                       "--predictors", "CM,MCM,ACM", "--compare-normalization", "-o", (dir / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("normalized") != std::string::npos);
    for (const char* name : {"report.normalized.json", "report.raw.json"}) {
      const auto report = nlohmann::json::parse(read_file(dir / "out" / name));
      REQUIRE(report["rows"].size() == 3);
      for (const auto& row : report["rows"]) CHECK(row["mae"].get<double>() <= row["rmse"].get<double>());
    }
    CHECK(nlohmann::json::parse(read_file(dir / "out" / "report.raw.json"))["dataset"]["normalization"] == false);
    CHECK(std::filesystem::exists(dir / "out" / "predictions.raw.tsv"));

    const Run single = run({"evaluate", "--dataset", (dir / "d.ndjson").string(), "--prune-k", "1",
                            "--predictors", "CM", "-o", (dir / "single").string()});
    CHECK(single.code == 0);
    CHECK(std::filesystem::exists(dir / "single" / "report.json"));
    CHECK(std::filesystem::exists(dir / "single" / "report.txt"));
    CHECK(std::filesystem::exists(dir / "single" / "predictions.tsv"));
  }

  TEST_CASE("evaluate rejects an empty predictor list") {
    TempDir dir("cli");
    const auto cfg = dir.write("c.json", R"({"dataset": "x.txt", "predictors": []})");
    const Run r = run({"--config", cfg.string(), "evaluate"});
    CHECK(r.code == cli::kConfigError);
    CHECK(r.err.find("no predictors") != std::string::npos);
  }

  TEST_CASE("flags override the config file") {
    TempDir dir("cli");
    std::vector<Review> ten;
    for (int k = 0; k < 10; ++k) ten.push_back(review("u" + std::to_string(k), "i", 4, "t", k));
    save_dataset(dir / "ten.ndjson", dataset(ten));
    const auto cfg = dir.write("c.json", R"({"dataset": "ten.ndjson", "prune_k": 50, "predictors": ["CM"]})");
    CHECK(run({"-c", cfg.string(), "evaluate", "-o", (dir / "a").string()}).code == cli::kDataError);
    CHECK(run({"-c", cfg.string(), "evaluate", "--prune-k", "1", "-o", (dir / "b").string()}).code == 0);
  }

  TEST_CASE("predict prints value, fallback and similarities") {
    TempDir dir("cli");
    save_dataset(dir / "train.ndjson", dataset({review("u", "j", 5, "great movi"), review("v", "i", 5, "great movi")}));
    save_dataset(dir / "test.ndjson", dataset({review("u", "i", 5, "whatever")}));
    const auto cfg = dir.write("c.json", R"({"prepared": {"train": "train.ndjson", "test": "test.ndjson"},
                                           "normalization": {"enabled": false}, "predictors": ["CM"]})");
    const Run r = run({"-c", cfg.string(), "predict", "u", "i", "-p", "CM"});
    REQUIRE(r.code == 0);
    CHECK(line_with(r.out, "predicted:") == "predicted: 5");
    CHECK(line_with(r.out, "fallback:") == "fallback: none");
    CHECK(line_with(r.out, "similarity_5:") == "similarity_5: 1.000000");
    CHECK(line_with(r.out, "similarity_1:") == "similarity_1: 0.000000");

    const Run cold = run({"-c", cfg.string(), "predict", "stranger", "i", "-p", "MCM"});
    REQUIRE(cold.code == 0);
    CHECK(line_with(cold.out, "fallback:") == "fallback: item_mean");

    const Run cf = run({"-c", cfg.string(), "-v", "predict", "u", "i", "-p", "cf-mcm"});
    REQUIRE(cf.code == 0);
    CHECK(line_with(cf.out, "predictor:") == "predictor: CF-MCM");
    CHECK(line_with(cf.out, "neighbor:").find("v weight 1") != std::string::npos);
  }

  TEST_CASE("predict with an unknown predictor lists the valid names") {
    const Run r = run({"predict", "u", "i", "-p", "CF-XYZ"});
    CHECK(r.code == cli::kConfigError);
    for (const char* name : {"CM", "MCM", "ACM", "CF-MCM", "CF-ACM", "CF-Pearson", "CF-Cosine", "base", "random"}) {
      CHECK(r.err.find(name) != std::string::npos);
    }
  }

  TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::kConfigError);
    CHECK(run({"frobnicate"}).code == cli::kConfigError);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"evaluate", "--weighting", "bm25", "--dataset", "x", "--predictors", "CM"}).code ==
          cli::kConfigError);
  }

  TEST_CASE("synth writes a loadable corpus") {
    TempDir dir("cli");
    const Run r = run({"synth", (dir / "s.txt").string(), "--reviews", "300", "--users", "60",
                       "--items", "40", "--seed", "3"});
    REQUIRE(r.code == 0);
    std::vector<ParseIssue> issues;
    CHECK(load_dataset(dir / "s.txt", &issues).size() == 300);
    CHECK(issues.empty());
    const Run again = run({"synth", (dir / "s2.txt").string(), "--reviews", "300", "--users", "60",
                           "--items", "40", "--seed", "3"});
    CHECK(read_file(dir / "s.txt") == read_file(dir / "s2.txt"));
    CHECK(run({"synth", (dir / "x.txt").string(), "--reviews", "5000", "--users", "5", "--items", "5"}).code ==
          cli::kConfigError);
  }
}
