#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "revpred/corpus.hpp"
#include "revpred/errors.hpp"
#include "revpred/eval.hpp"
#include "revpred/experiment.hpp"
#include "revpred/predictors.hpp"
#include "revpred/profiles.hpp"
#include "revpred/random.hpp"
#include "revpred/synthetic.hpp"

namespace revpred::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOptions {
  std::string config_path;
  int verbosity = 0;
  std::optional<std::size_t> threads;
  std::string output_dir;
};

// Config overrides shared by prepare/evaluate/predict. Flags win over the file.
struct Overrides {
  std::string dataset;
  std::optional<int> prune_k;
  std::optional<std::size_t> sample_n;
  std::string distribution;
  std::optional<std::uint64_t> sample_seed;
  std::optional<double> fraction;
  std::optional<std::uint64_t> split_seed;
  std::string stage_order;
  std::string weighting;
  std::vector<std::string> predictors;
  bool no_normalization = false;
};

class Logger {
 public:
  Logger(std::ostream& err, int verbosity) : err_(err), verbosity_(verbosity) {}
  void info(const std::string& msg) const {
    if (verbosity_ >= 1) err_ << "revpred: " << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (verbosity_ >= 2) err_ << "revpred: " << msg << '\n';
  }
  int verbosity() const { return verbosity_; }

 private:
  std::ostream& err_;
  int verbosity_;
};

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Weighting parse_weighting(const std::string& s) {
  if (s == "tf") return Weighting::tf;
  if (s == "tfidf") return Weighting::tfidf;
  throw ConfigError("unknown weighting '" + s + "' (expected one of: tf, tfidf)");
}

void add_overrides(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--dataset", o.dataset, "Review corpus (SNAP text or NDJSON)");
  cmd.add_option("--prune-k", o.prune_k, "Minimum reviews per user and per item");
  cmd.add_option("--sample-n", o.sample_n, "Stratified sample size");
  cmd.add_option("--distribution", o.distribution, "Sample star mix: balanced | imbalanced");
  cmd.add_option("--sample-seed", o.sample_seed, "Sampling seed");
  cmd.add_option("--train-fraction", o.fraction, "Share of reviews used for training");
  cmd.add_option("--split-seed", o.split_seed, "Train/test split seed");
  cmd.add_option("--stage-order", o.stage_order, "prune_then_sample | sample_then_prune");
  cmd.add_option("--weighting", o.weighting, "Term weighting for every predictor: tf | tfidf");
  cmd.add_option("--predictors", o.predictors, "Predictors to run (replaces the config list)")
      ->delimiter(',');
  cmd.add_flag("--no-normalization", o.no_normalization, "Use raw whitespace tokens");
}

// Builds the effective config: file (if any), then flag overrides.
ExperimentConfig effective_config(const GlobalOptions& g, const Overrides& o) {
  ExperimentConfig c;
  if (!g.config_path.empty()) c = load_experiment_config(g.config_path, false);
  if (!o.dataset.empty()) {
    c.dataset = o.dataset;
    c.train_path.reset();
    c.test_path.reset();
  }
  if (o.prune_k) c.prune_k = *o.prune_k;
  if (o.sample_n || !o.distribution.empty() || o.sample_seed) {
    SampleSpec s = c.sample.value_or(SampleSpec{0, kImbalancedMix, 0});
    if (o.sample_n) s.n = *o.sample_n;
    if (o.sample_seed) s.seed = *o.sample_seed;
    if (!o.distribution.empty()) {
      auto text = json{{"dataset", "x"}, {"sample", {{"n", 1}, {"distribution", o.distribution}}}};
      s.distribution = parse_experiment_config(text.dump(), {}, false).sample->distribution;
    }
    c.sample = s;
  }
  if (o.fraction) c.train_fraction = *o.fraction;
  if (o.split_seed) c.split_seed = *o.split_seed;
  if (!o.stage_order.empty()) {
    c.stage_order = parse_experiment_config(json{{"stage_order", o.stage_order}}.dump(), {}, false)
                        .stage_order;
  }
  if (!o.predictors.empty()) {
    c.predictors.clear();
    for (const auto& name : o.predictors) {
      PredictorSpec spec;
      spec.kind = parse_predictor(name);
      spec.label = std::string(predictor_name(spec.kind));
      c.predictors.push_back(spec);
    }
  }
  if (!o.weighting.empty()) {
    const Weighting w = parse_weighting(o.weighting);
    for (auto& p : c.predictors) p.options.weighting = w;
  }
  if (o.no_normalization) c.normalization.enabled = false;
  if (g.threads) c.threads = *g.threads;
  if (!g.output_dir.empty()) c.output_dir = g.output_dir;
  return c;
}

// prepare and predict do not need a predictor list to be valid.
void validate_data_settings(ExperimentConfig c) {
  if (c.predictors.empty()) c.predictors.push_back({});
  validate(c);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DataError("cannot write '" + path.string() + "'");
}

std::string format_value(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

// ---- stats ------------------------------------------------------------------

int cmd_stats(const std::string& path, const Logger& log, std::ostream& out, std::ostream& err) {
  std::vector<ParseIssue> issues;
  const Dataset ds = load_dataset(path, &issues);
  const DatasetStats st = compute_stats(ds);
  out << "dataset: " << path << '\n';
  out << std::left << std::setw(28) << "Number of reviews" << st.n_reviews << '\n'
      << std::setw(28) << "Number of users" << st.n_users << '\n'
      << std::setw(28) << "Number of items" << st.n_items << '\n'
      << std::setw(28) << "Median words per review" << st.median_words_per_review << '\n';
  for (int r : kStars) {
    out << std::setw(28) << (std::to_string(r) + (r == 1 ? " star" : " stars"))
        << st.rating_histogram[star_index(r)] << '\n';
  }
  if (!issues.empty()) {
    err << "warning: " << issues.size() << " malformed record(s) skipped\n";
    for (const auto& issue : issues) log.info(issue.message);
  }
  return kOk;
}

// ---- prepare ----------------------------------------------------------------

int cmd_prepare(const ExperimentConfig& config, const Logger& log, std::ostream& out) {
  validate_data_settings(config);
  const PreparedData data = prepare_data(config);
  const auto& d = data.descriptor;
  const fs::path dir = config.output_dir;
  log.info("writing splits to " + dir.string());
  save_dataset(dir / "train.ndjson", data.train);
  save_dataset(dir / "test.ndjson", data.test);

  json manifest = {
      {"source", d.source},
      {"reviews",
       {{"loaded", d.n_loaded},
        {"malformed", d.n_parse_errors},
        {"after_prune", d.n_after_prune},
        {"after_sample", d.n_after_sample},
        {"train", d.n_train},
        {"test", d.n_test}}},
      {"prune_k", d.prune_k},
      {"stage_order", to_string(d.stage_order)},
      {"split", {{"fraction", d.train_fraction}, {"seed", d.split_seed}}},
      {"train", {{"file", "train.ndjson"}, {"fingerprint", hex(fingerprint(data.train))}}},
      {"test", {{"file", "test.ndjson"}, {"fingerprint", hex(fingerprint(data.test))}}},
      {"provenance", d.provenance},
  };
  if (d.sample) {
    manifest["sample"] = {
        {"n", d.sample->n},
        {"distribution",
         std::vector<double>(d.sample->distribution.begin(), d.sample->distribution.end())},
        {"seed", d.sample->seed}};
  } else {
    manifest["sample"] = nullptr;
  }
  const std::string text = manifest.dump(2) + "\n";
  write_text(dir / "manifest.json", text);

  out << "reviews: " << d.n_loaded << " loaded -> " << d.n_after_prune << " after prune(k="
      << d.prune_k << ") -> " << d.n_after_sample << " after sample\n"
      << "train: " << d.n_train << "  test: " << d.n_test << '\n'
      << "manifest: " << (dir / "manifest.json").string() << "  hash " << hex(fnv1a64(text))
      << '\n';
  return kOk;
}

// ---- evaluate ---------------------------------------------------------------

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::string& suffix) {
  const fs::path dir = config.output_dir;
  write_text(dir / ("report" + suffix + ".json"), report_to_json(result.report) + "\n");
  std::ostringstream table;
  write_report_table(table, result.report);
  write_text(dir / ("report" + suffix + ".txt"), table.str());
  if (config.write_prediction_log) {
    std::ostringstream tsv;
    write_prediction_log(tsv, result.log);
    write_text(dir / ("predictions" + suffix + ".tsv"), tsv.str());
  }
}

bool has_row_errors(const EvalReport& report, std::ostream& err) {
  bool any = false;
  for (const auto& row : report.rows) {
    if (row.error) {
      err << "error: predictor " << row.name << ": " << *row.error << '\n';
      any = true;
    }
  }
  return any;
}

int cmd_evaluate(const ExperimentConfig& config, bool compare, const Logger& log,
                 std::ostream& out, std::ostream& err) {
  validate(config);
  log.info("preparing data");
  const PreparedData data = prepare_data(config);
  log.info("train " + std::to_string(data.train.size()) + ", test " +
           std::to_string(data.test.size()));
  if (!compare) {
    const ExperimentResult result = evaluate_predictors(config, data);
    write_outputs(config, result, "");
    write_report_table(out, result.report);
    return has_row_errors(result.report, err) ? kDataError : kOk;
  }

  // Same data and predictors with and without the normalization pipeline.
  ExperimentConfig on = config;
  on.normalization.enabled = true;
  ExperimentConfig off = config;
  off.normalization.enabled = false;
  PreparedData data_off = data;
  data_off.descriptor.normalization = false;
  PreparedData data_on = data;
  data_on.descriptor.normalization = true;

  log.info("evaluating with normalization");
  const ExperimentResult with = evaluate_predictors(on, data_on);
  log.info("evaluating without normalization");
  const ExperimentResult without = evaluate_predictors(off, data_off);
  write_outputs(on, with, ".normalized");
  write_outputs(off, without, ".raw");

  const std::vector<std::string> labels = {"raw text", "normalized"};
  const std::vector<EvalReport> reports = {without.report, with.report};
  std::ostringstream table;
  write_comparison_table(table, labels, reports);
  write_text(fs::path(config.output_dir) / "comparison.txt", table.str());
  out << table.str();
  const bool bad = has_row_errors(with.report, err) | has_row_errors(without.report, err);
  return bad ? kDataError : kOk;
}

// ---- predict ----------------------------------------------------------------

int cmd_predict(const ExperimentConfig& config, const std::string& user, const std::string& item,
                const std::string& predictor, const std::string& weighting, const Logger& log,
                std::ostream& out) {
  // Resolve the predictor first so a bad name fails before any data work.
  const PredictorKind kind = parse_predictor(predictor);
  // Knobs come from the config's entry for this predictor, if it has one.
  PredictorOptions options;
  for (const auto& spec : config.predictors) {
    if (spec.kind == kind) {
      options = spec.options;
      break;
    }
  }
  if (!weighting.empty()) options.weighting = parse_weighting(weighting);
  validate_data_settings(config);
  const PreparedData data = prepare_data(config);
  log.info("building profiles from " + std::to_string(data.train.size()) + " training reviews");
  const ProfileIndex index = load_or_build_profiles(config, data.train);
  const Prediction p = predict(kind, user, item, index, options);

  out << "predictor: " << predictor_name(kind) << '\n'
      << "user: " << user << '\n'
      << "item: " << item << '\n'
      << "predicted: " << format_value(p.value) << '\n'
      << "fallback: " << fallback_name(p.fallback) << '\n';
  if (p.similarities) {
    for (int r : kStars) {
      out << "similarity_" << r << ": " << std::fixed << std::setprecision(6)
          << (*p.similarities)[star_index(r)] << '\n';
      out.unsetf(std::ios::fixed);
    }
  }
  if (log.verbosity() >= 1 && (kind == PredictorKind::cf_mcm || kind == PredictorKind::cf_acm)) {
    const TextCfVariant v = kind == PredictorKind::cf_mcm ? TextCfVariant::cf_mcm : TextCfVariant::cf_acm;
    for (const auto& n : text_cf_neighbors(user, item, v, index, options)) {
      out << "neighbor: " << n.user_id << " weight " << format_value(n.weight) << '\n';
    }
  }
  return kOk;
}

// ---- synth ------------------------------------------------------------------

struct SynthOptions {
  std::string out_path;
  SyntheticCorpusSpec spec;
  std::string mix = "imbalanced";
};

int cmd_synth(const SynthOptions& o, const Logger& log, std::ostream& out) {
  SyntheticCorpusSpec spec = o.spec;
  if (o.mix == "balanced") {
    spec.star_mix = kBalancedMix;
  } else if (o.mix == "imbalanced") {
    spec.star_mix = kImbalancedMix;
  } else {
    throw ConfigError("unknown distribution preset '" + o.mix + "' (balanced, imbalanced)");
  }
  std::vector<Review> reviews;
  try {
    reviews = generate_synthetic_corpus(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const fs::path path = o.out_path;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (path.extension() == ".ndjson" || path.extension() == ".jsonl") {
    save_dataset(path, make_dataset(std::move(reviews), "synthetic"));
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write '" + path.string() + "'");
    write_snap(f, reviews);
  }
  log.info("seed " + std::to_string(spec.seed));
  out << "wrote " << spec.n_reviews << " reviews to " << path.string() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Star-rating prediction from review text", "revpred"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_version_flag("--version", "revpred 0.3.0");

  GlobalOptions g;
  app.add_option("-c,--config", g.config_path, "Experiment config (JSON)");
  app.add_flag("-v,--verbose", g.verbosity, "More output on stderr (repeatable)");
  app.add_option("-j,--threads", g.threads, "Worker threads for evaluation")
      ->check(CLI::PositiveNumber);
  app.add_option("-o,--output-dir", g.output_dir, "Directory for generated files");

  std::string stats_path;
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("dataset", stats_path, "Review corpus")->required();

  Overrides prep_o;
  auto* prepare = app.add_subcommand("prepare", "Prune, sample and split; write train/test files");
  add_overrides(*prepare, prep_o);

  Overrides eval_o;
  bool compare = false;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictors with MAE and RMSE");
  add_overrides(*evaluate, eval_o);
  evaluate->add_flag("--compare-normalization", compare,
                     "Run every predictor with and without text normalization");

  Overrides pred_o;
  std::string user, item, predictor_arg;
  auto* predict_cmd = app.add_subcommand("predict", "Predict one user's rating of one item");
  predict_cmd->add_option("user", user, "User id")->required();
  predict_cmd->add_option("item", item, "Item id")->required();
  predict_cmd->add_option("-p,--predictor", predictor_arg, "Predictor name")->required();
  add_overrides(*predict_cmd, pred_o);

  SynthOptions synth_o;
  auto* synth = app.add_subcommand("synth", "Write a synthetic review corpus");
  synth->add_option("out", synth_o.out_path, "Output file (.ndjson for NDJSON, else SNAP text)")
      ->required();
  synth->add_option("--reviews", synth_o.spec.n_reviews, "Number of reviews");
  synth->add_option("--users", synth_o.spec.n_users, "Number of users");
  synth->add_option("--items", synth_o.spec.n_items, "Number of items");
  synth->add_option("--seed", synth_o.spec.seed, "Generator seed");
  synth->add_option("--distribution", synth_o.mix, "Star mix: balanced | imbalanced");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  const Logger log(err, g.verbosity);
  try {
    if (stats->parsed()) return cmd_stats(stats_path, log, out, err);
    if (synth->parsed()) return cmd_synth(synth_o, log, out);
    if (prepare->parsed()) return cmd_prepare(effective_config(g, prep_o), log, out);
    if (evaluate->parsed()) {
      return cmd_evaluate(effective_config(g, eval_o), compare, log, out, err);
    }
    if (predict_cmd->parsed()) {
      // Name check comes first so that a typo is reported as such.
      parse_predictor(predictor_arg);
      return cmd_predict(effective_config(g, pred_o), user, item, predictor_arg, pred_o.weighting,
                         log, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace revpred::cli
