#pragma once

// Declarative experiment configuration (JSON) for the evaluation harness.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revpred/corpus.hpp"
#include "revpred/predictors.hpp"
#include "revpred/textnorm.hpp"

namespace revpred {

enum class StageOrder { prune_then_sample, sample_then_prune };

struct SampleSpec {
  std::size_t n = 0;
  StarDistribution distribution{};
  std::uint64_t seed = 0;
};

/// Star mixes of the two evaluation sets (indexed 1..5 stars).
inline constexpr StarDistribution kImbalancedMix = {0.08, 0.06, 0.10, 0.21, 0.55};
inline constexpr StarDistribution kBalancedMix = {0.12, 0.09, 0.15, 0.31, 0.33};

struct NormalizationSettings {
  bool enabled = true;
  std::optional<std::filesystem::path> stopwords;  // default: shipped list
  std::optional<std::filesystem::path> slang;      // default: shipped list
  NormSteps steps;
};

struct PredictorSpec {
  PredictorKind kind = PredictorKind::cm;
  std::string label;  // report row name; defaults to the predictor name
  PredictorOptions options;
};

struct ExperimentConfig {
  std::filesystem::path dataset;
  /// Pre-split files (e.g. from `revpred prepare`); when set, loading,
  /// pruning, sampling and splitting are skipped.
  std::optional<std::filesystem::path> train_path;
  std::optional<std::filesystem::path> test_path;

  int prune_k = 5;
  StageOrder stage_order = StageOrder::prune_then_sample;
  std::optional<SampleSpec> sample;
  double train_fraction = 0.8;
  std::uint64_t split_seed = 42;

  NormalizationSettings normalization;
  std::vector<PredictorSpec> predictors;
  bool round_all = false;  // score every predictor on whole stars
  std::size_t threads = 1;

  std::filesystem::path output_dir = "revpred-out";
  bool write_prediction_log = true;
  std::optional<std::filesystem::path> profile_cache;
};

/// Parses a JSON config. Relative paths are resolved against `base_dir`.
/// Throws ConfigError on malformed input, and on invalid values unless
/// `check` is false (callers that apply overrides validate afterwards).
ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir = {},
                                         bool check = true);

/// Reads and parses a config file; ConfigError if it cannot be read.
ExperimentConfig load_experiment_config(const std::filesystem::path& path, bool check = true);

/// Throws ConfigError for: empty predictor list, prune_k < 1, fraction
/// outside (0, 1), a sample distribution not summing to 1 +- 1e-9, a missing
/// dataset path, threads == 0.
void validate(const ExperimentConfig& config);

/// Canonical JSON form; equal configs produce equal strings.
std::string to_json(const ExperimentConfig& config);

/// Hash of to_json(config).
std::uint64_t config_hash(const ExperimentConfig& config);

/// Word lists and steps named by the config (all steps off when disabled).
NormConfig resolve_norm_config(const ExperimentConfig& config);

std::string_view to_string(StageOrder order);
std::string_view to_string(Weighting weighting);

}  // namespace revpred
