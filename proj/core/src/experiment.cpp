#include "revpred/experiment.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "revpred/errors.hpp"
#include "revpred/random.hpp"

namespace revpred {
namespace {

using nlohmann::json;

template <typename Enum, std::size_t N>
Enum parse_enum(const json& j, const std::pair<std::string_view, Enum> (&table)[N],
                std::string_view what) {
  const auto s = j.get<std::string>();
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  std::string valid;
  for (const auto& [name, value] : table) valid += (valid.empty() ? "" : ", ") + std::string(name);
  throw ConfigError("unknown " + std::string(what) + " '" + s + "' (expected one of: " + valid +
                    ")");
}

template <typename Enum, std::size_t N>
std::string_view enum_name(Enum v, const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::pair<std::string_view, StageOrder> kStageOrders[] = {
    {"prune_then_sample", StageOrder::prune_then_sample},
    {"sample_then_prune", StageOrder::sample_then_prune}};
constexpr std::pair<std::string_view, Weighting> kWeightings[] = {{"tf", Weighting::tf},
                                                                 {"tfidf", Weighting::tfidf}};
constexpr std::pair<std::string_view, TieBreak> kTieBreaks[] = {
    {"nearest_user_mean", TieBreak::nearest_user_mean}, {"larger_star", TieBreak::larger_star}};
constexpr std::pair<std::string_view, CfAcmAveraging> kAveragings[] = {
    {"shared_buckets", CfAcmAveraging::shared_buckets}, {"all_stars", CfAcmAveraging::all_stars}};
constexpr std::pair<std::string_view, CfComparison> kComparisons[] = {
    {"concatenated", CfComparison::concatenated}, {"per_review", CfComparison::per_review}};

std::filesystem::path resolve(const std::filesystem::path& base, const json& j) {
  std::filesystem::path p = j.get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

StarDistribution parse_distribution(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "balanced") return kBalancedMix;
    if (s == "imbalanced") return kImbalancedMix;
    throw ConfigError("unknown distribution preset '" + s + "' (balanced, imbalanced)");
  }
  StarDistribution d{};
  if (j.is_array()) {
    if (j.size() != kNumStars) throw ConfigError("distribution array needs 5 entries (1..5 stars)");
    for (std::size_t s = 0; s < kNumStars; ++s) d[s] = j[s].get<double>();
    return d;
  }
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      const int star = std::atoi(key.c_str());
      if (!is_valid_star(star) || key.size() != 1) {
        throw ConfigError("distribution key '" + key + "' is not a star value 1..5");
      }
      d[star_index(star)] = value.get<double>();
    }
    return d;
  }
  throw ConfigError("distribution must be a preset name, an array or an object");
}

void parse_options(const json& j, PredictorOptions& o) {
  if (auto it = j.find("weighting"); it != j.end()) o.weighting = parse_enum(*it, kWeightings, "weighting");
  if (auto it = j.find("tie_break"); it != j.end()) o.tie_break = parse_enum(*it, kTieBreaks, "tie_break");
  if (auto it = j.find("cf_acm_averaging"); it != j.end()) {
    o.cf_acm_averaging = parse_enum(*it, kAveragings, "cf_acm_averaging");
  }
  if (auto it = j.find("cf_comparison"); it != j.end()) {
    o.cf_comparison = parse_enum(*it, kComparisons, "cf_comparison");
  }
  if (auto it = j.find("min_overlap"); it != j.end()) o.min_overlap = it->get<std::size_t>();
  if (auto it = j.find("top_k"); it != j.end()) {
    if (it->is_null()) {
      o.top_k.reset();
    } else {
      o.top_k = it->get<std::size_t>();
    }
  }
  if (auto it = j.find("clamp"); it != j.end()) o.clamp = it->get<bool>();
  if (auto it = j.find("random_seed"); it != j.end()) o.random_seed = it->get<std::uint64_t>();
}

json options_to_json(const PredictorOptions& o) {
  return json{{"weighting", enum_name(o.weighting, kWeightings)},
              {"tie_break", enum_name(o.tie_break, kTieBreaks)},
              {"cf_acm_averaging", enum_name(o.cf_acm_averaging, kAveragings)},
              {"cf_comparison", enum_name(o.cf_comparison, kComparisons)},
              {"min_overlap", o.min_overlap},
              {"top_k", o.top_k ? json(*o.top_k) : json(nullptr)},
              {"clamp", o.clamp},
              {"random_seed", o.random_seed}};
}

void parse_steps(const json& j, NormSteps& s) {
  s.lowercase = j.value("lowercase", s.lowercase);
  s.punctuation = j.value("punctuation", s.punctuation);
  s.numbers = j.value("numbers", s.numbers);
  s.stopwords = j.value("stopwords", s.stopwords);
  s.slang = j.value("slang", s.slang);
  s.stemming = j.value("stemming", s.stemming);
}

ExperimentConfig from_json(const json& j, const std::filesystem::path& base) {
  ExperimentConfig c;
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  if (auto it = j.find("dataset"); it != j.end()) c.dataset = resolve(base, *it);
  if (auto it = j.find("prepared"); it != j.end()) {
    c.train_path = resolve(base, it->at("train"));
    c.test_path = resolve(base, it->at("test"));
  }
  c.prune_k = j.value("prune_k", c.prune_k);
  if (auto it = j.find("stage_order"); it != j.end()) {
    c.stage_order = parse_enum(*it, kStageOrders, "stage_order");
  }
  if (auto it = j.find("sample"); it != j.end() && !it->is_null()) {
    SampleSpec s;
    s.n = it->at("n").get<std::size_t>();
    s.distribution = parse_distribution(it->at("distribution"));
    s.seed = it->value("seed", std::uint64_t{0});
    c.sample = s;
  }
  if (auto it = j.find("split"); it != j.end()) {
    c.train_fraction = it->value("fraction", c.train_fraction);
    c.split_seed = it->value("seed", c.split_seed);
  }
  if (auto it = j.find("normalization"); it != j.end()) {
    auto& n = c.normalization;
    n.enabled = it->value("enabled", n.enabled);
    if (auto p = it->find("stopwords"); p != it->end() && !p->is_null()) n.stopwords = resolve(base, *p);
    if (auto p = it->find("slang"); p != it->end() && !p->is_null()) n.slang = resolve(base, *p);
    if (auto p = it->find("steps"); p != it->end()) parse_steps(*p, n.steps);
  }
  PredictorOptions defaults;
  if (auto it = j.find("weighting"); it != j.end()) {
    defaults.weighting = parse_enum(*it, kWeightings, "weighting");
  }
  if (auto it = j.find("options"); it != j.end()) parse_options(*it, defaults);
  if (auto it = j.find("predictors"); it != j.end()) {
    for (const auto& p : *it) {
      PredictorSpec spec;
      spec.options = defaults;
      if (p.is_string()) {
        spec.kind = parse_predictor(p.get<std::string>());
      } else {
        spec.kind = parse_predictor(p.at("name").get<std::string>());
        spec.label = p.value("label", std::string{});
        parse_options(p, spec.options);
      }
      if (spec.label.empty()) spec.label = std::string(predictor_name(spec.kind));
      c.predictors.push_back(std::move(spec));
    }
  }
  c.round_all = j.value("round_all", c.round_all);
  c.threads = j.value("threads", c.threads);
  if (auto it = j.find("output"); it != j.end()) {
    if (auto d = it->find("dir"); d != it->end()) c.output_dir = resolve(base, *d);
    c.write_prediction_log = it->value("prediction_log", c.write_prediction_log);
  }
  if (auto it = j.find("profile_cache"); it != j.end() && !it->is_null()) {
    c.profile_cache = resolve(base, *it);
  }
  return c;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir, bool check) {
  ExperimentConfig c;
  try {
    c = from_json(json::parse(json_text), base_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed experiment config: ") + e.what());
  }
  if (check) validate(c);
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path, bool check) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path.parent_path(), check);
}

void validate(const ExperimentConfig& c) {
  if (c.predictors.empty()) throw ConfigError("config lists no predictors");
  if (c.prune_k < 1) throw ConfigError("prune_k must be >= 1");
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
    throw ConfigError("split fraction must lie strictly between 0 and 1");
  }
  if (c.threads == 0) throw ConfigError("threads must be >= 1");
  if (c.train_path.has_value() != c.test_path.has_value()) {
    throw ConfigError("prepared splits need both train and test paths");
  }
  if (c.dataset.empty() && !c.train_path) throw ConfigError("config names no dataset");
  if (c.sample) {
    double sum = 0.0;
    for (double p : c.sample->distribution) {
      if (p < 0.0 || !std::isfinite(p)) throw ConfigError("sample distribution has a bad entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("sample distribution sums to " + std::to_string(sum) + ", not 1");
    }
    if (c.sample->n == 0) throw ConfigError("sample size must be positive");
  }
}

std::string to_json(const ExperimentConfig& c) {
  json j;
  j["dataset"] = c.dataset.string();
  if (c.train_path) j["prepared"] = {{"train", c.train_path->string()}, {"test", c.test_path->string()}};
  j["prune_k"] = c.prune_k;
  j["stage_order"] = enum_name(c.stage_order, kStageOrders);
  if (c.sample) {
    j["sample"] = {{"n", c.sample->n},
                   {"distribution", std::vector<double>(c.sample->distribution.begin(),
                                                        c.sample->distribution.end())},
                   {"seed", c.sample->seed}};
  } else {
    j["sample"] = nullptr;
  }
  j["split"] = {{"fraction", c.train_fraction}, {"seed", c.split_seed}};
  const auto& n = c.normalization;
  const auto& s = n.steps;
  j["normalization"] = {{"enabled", n.enabled},
                        {"stopwords", n.stopwords ? json(n.stopwords->string()) : json(nullptr)},
                        {"slang", n.slang ? json(n.slang->string()) : json(nullptr)},
                        {"steps",
                         {{"lowercase", s.lowercase},
                          {"punctuation", s.punctuation},
                          {"numbers", s.numbers},
                          {"stopwords", s.stopwords},
                          {"slang", s.slang},
                          {"stemming", s.stemming}}}};
  json preds = json::array();
  for (const auto& p : c.predictors) {
    json pj = options_to_json(p.options);
    pj["name"] = predictor_name(p.kind);
    pj["label"] = p.label;
    preds.push_back(std::move(pj));
  }
  j["predictors"] = std::move(preds);
  j["round_all"] = c.round_all;
  return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& config) { return fnv1a64(to_json(config)); }

NormConfig resolve_norm_config(const ExperimentConfig& config) {
  const auto& n = config.normalization;
  if (!n.enabled) {
    NormConfig off;
    off.steps = NormSteps::none();
    return off;
  }
  const auto dir = default_data_dir();
  NormConfig nc = load_wordlists(n.stopwords.value_or(dir / "stopwords.txt"),
                                 n.slang.value_or(dir / "slang.tsv"));
  nc.steps = n.steps;
  return nc;
}

std::string_view to_string(StageOrder order) { return enum_name(order, kStageOrders); }
std::string_view to_string(Weighting weighting) { return enum_name(weighting, kWeightings); }

}  // namespace revpred
