#pragma once

// Error metrics and the end-to-end evaluation harness.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revpred/corpus.hpp"
#include "revpred/experiment.hpp"
#include "revpred/predictors.hpp"
#include "revpred/profiles.hpp"

namespace revpred {

struct PredictionPair {
  double predicted = 0.0;
  double actual = 0.0;
};

/// Mean absolute error. Throws std::invalid_argument on empty input.
double mae(std::span<const PredictionPair> pairs);

/// Root mean squared error. Throws std::invalid_argument on empty input.
double rmse(std::span<const PredictionPair> pairs);

struct FallbackCounts {
  std::size_t none = 0;
  std::size_t user_mean = 0;
  std::size_t item_mean = 0;
  std::size_t global_mean = 0;

  void add(Fallback f);
  bool operator==(const FallbackCounts&) const = default;
};

struct ReportRow {
  std::string name;
  PredictorKind kind = PredictorKind::cm;
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t n_predictions = 0;
  FallbackCounts fallbacks;
  std::optional<std::string> error;  // set when the predictor could not run

  bool operator==(const ReportRow&) const = default;
};

struct DatasetDescriptor {
  std::string source;
  std::size_t n_loaded = 0;
  std::size_t n_parse_errors = 0;
  std::size_t n_after_prune = 0;
  std::size_t n_after_sample = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  int prune_k = 0;
  StageOrder stage_order = StageOrder::prune_then_sample;
  std::optional<SampleSpec> sample;
  double train_fraction = 0.0;
  std::uint64_t split_seed = 0;
  bool normalization = true;
  std::vector<std::string> provenance;
};

struct EvalReport {
  DatasetDescriptor dataset;
  std::vector<ReportRow> rows;
  std::uint64_t config_hash = 0;
};

/// One scored prediction, as written to the audit log.
struct PredictionRecord {
  std::string predictor;
  std::string user;
  std::string item;
  double predicted = 0.0;
  double actual = 0.0;
  Fallback fallback = Fallback::none;
};

struct PreparedData {
  Dataset train;
  Dataset test;
  DatasetDescriptor descriptor;
};

/// Load -> prune -> sample -> split (or the reverse prune/sample order), or
/// load the pre-split files. Errors carry the failing stage in the message.
PreparedData prepare_data(const ExperimentConfig& config);

struct ExperimentResult {
  EvalReport report;
  std::vector<PredictionRecord> log;
};

/// Scores every configured predictor on every test review. When `index` is
/// null the profiles are built from data.train (or taken from the config's
/// profile cache).
ExperimentResult evaluate_predictors(const ExperimentConfig& config, const PreparedData& data,
                                     const ProfileIndex* index = nullptr);

/// prepare_data followed by evaluate_predictors. Deterministic in `config`.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Builds (or loads from the configured cache) the profiles for a train set.
ProfileIndex load_or_build_profiles(const ExperimentConfig& config, const Dataset& train);

/// Aligned table: one row per predictor, MAE and RMSE columns.
void write_report_table(std::ostream& out, const EvalReport& report);

/// Side-by-side MAE/RMSE table of several labelled reports, e.g. the same
/// predictors with and without preprocessing.
void write_comparison_table(std::ostream& out, std::span<const std::string> labels,
                            std::span<const EvalReport> reports);

std::string report_to_json(const EvalReport& report);

/// Tab-separated: predictor, user, item, predicted, actual, fallback.
void write_prediction_log(std::ostream& out, std::span<const PredictionRecord> log);
std::vector<PredictionRecord> read_prediction_log(std::istream& in);

/// MAE/RMSE per predictor, recomputed from a prediction log.
std::vector<ReportRow> metrics_from_log(std::span<const PredictionRecord> log);

}  // namespace revpred
