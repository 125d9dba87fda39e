#include "revpred/eval.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "revpred/errors.hpp"
#include "revpred/random.hpp"

namespace revpred {
namespace {

// Runs `f`, prefixing any library error with the pipeline stage.
template <typename F>
auto staged(std::string_view stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(stage) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string(stage) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string(stage) + ": " + e.what());
  }
}

// Calls f(i) for i in [0, n), striped over `threads` workers. Results must
// be written to per-index slots so the outcome is schedule independent.
template <typename F>
void parallel_for(std::size_t n, std::size_t threads, F f) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += threads) f(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

ReportRow error_row(const PredictorSpec& spec, std::string message) {
  ReportRow row;
  row.name = spec.label;
  row.kind = spec.kind;
  row.error = std::move(message);
  return row;
}

}  // namespace

double mae(std::span<const PredictionPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("mae: no predictions");
  double sum = 0.0;
  for (const auto& p : pairs) sum += std::abs(p.predicted - p.actual);
  return sum / static_cast<double>(pairs.size());
}

double rmse(std::span<const PredictionPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("rmse: no predictions");
  double sum = 0.0;
  for (const auto& p : pairs) sum += (p.predicted - p.actual) * (p.predicted - p.actual);
  return std::sqrt(sum / static_cast<double>(pairs.size()));
}

void FallbackCounts::add(Fallback f) {
  switch (f) {
    case Fallback::none: ++none; break;
    case Fallback::user_mean: ++user_mean; break;
    case Fallback::item_mean: ++item_mean; break;
    case Fallback::global_mean: ++global_mean; break;
  }
}

PreparedData prepare_data(const ExperimentConfig& config) {
  PreparedData out;
  auto& d = out.descriptor;
  d.prune_k = config.prune_k;
  d.stage_order = config.stage_order;
  d.sample = config.sample;
  d.train_fraction = config.train_fraction;
  d.split_seed = config.split_seed;
  d.normalization = config.normalization.enabled;

  if (config.train_path) {
    std::vector<ParseIssue> issues;
    out.train = staged("load train split", [&] { return load_dataset(*config.train_path, &issues); });
    out.test = staged("load test split", [&] { return load_dataset(*config.test_path, &issues); });
    d.source = config.train_path->string() + " + " + config.test_path->string();
    d.n_parse_errors = issues.size();
    d.n_loaded = d.n_after_prune = d.n_after_sample = out.train.size() + out.test.size();
  } else {
    std::vector<ParseIssue> issues;
    Dataset ds = staged("load", [&] { return load_dataset(config.dataset, &issues); });
    d.source = config.dataset.string();
    d.n_loaded = ds.size();
    d.n_parse_errors = issues.size();
    auto prune = [&](const Dataset& in) {
      Dataset pruned = staged("prune", [&] { return prune_min_ratings(in, config.prune_k); });
      d.n_after_prune = pruned.size();
      return pruned;
    };
    auto sample = [&](Dataset in) {
      if (config.sample) {
        in = staged("sample", [&] {
          return stratified_sample(in, config.sample->n, config.sample->distribution,
                                   config.sample->seed);
        });
      }
      d.n_after_sample = in.size();
      return in;
    };
    if (config.stage_order == StageOrder::prune_then_sample) {
      ds = sample(prune(ds));
    } else {
      ds = prune(sample(std::move(ds)));
    }
    if (ds.empty()) throw DataError("split: no reviews left after pruning/sampling");
    auto split = staged("split", [&] {
      return split_train_test(ds, config.train_fraction, config.split_seed);
    });
    out.train = std::move(split.train);
    out.test = std::move(split.test);
  }
  d.n_train = out.train.size();
  d.n_test = out.test.size();
  d.provenance = out.train.provenance;
  return out;
}

ProfileIndex load_or_build_profiles(const ExperimentConfig& config, const Dataset& train) {
  const NormConfig norm = staged("normalization config", [&] { return resolve_norm_config(config); });
  if (config.profile_cache) {
    const std::uint64_t key = hash_combine(fingerprint(train), fingerprint(norm));
    if (auto cached = staged("profile cache", [&] { return load_snapshot(*config.profile_cache, key); })) {
      return std::move(*cached);
    }
    ProfileIndex index = staged("build profiles", [&] { return build_profiles(train, norm); });
    staged("profile cache", [&] {
      save_snapshot(*config.profile_cache, index, key);
      return 0;
    });
    return index;
  }
  return staged("build profiles", [&] { return build_profiles(train, norm); });
}

ExperimentResult evaluate_predictors(const ExperimentConfig& config, const PreparedData& data,
                                     const ProfileIndex* index) {
  ExperimentResult result;
  result.report.dataset = data.descriptor;
  result.report.config_hash = config_hash(config);

  std::optional<ProfileIndex> built;
  std::string index_error;
  if (!index) {
    if (data.train.empty()) {
      index_error = "empty training split";
    } else {
      built.emplace(load_or_build_profiles(config, data.train));
      index = &*built;
    }
  }

  const auto& test = data.test.reviews;
  for (const PredictorSpec& spec : config.predictors) {
    if (!index) {
      result.report.rows.push_back(error_row(spec, index_error));
      continue;
    }
    if (test.empty()) {
      result.report.rows.push_back(error_row(spec, "empty test split"));
      continue;
    }
    std::vector<Prediction> preds(test.size());
    parallel_for(test.size(), config.threads, [&](std::size_t k) {
      preds[k] = predict(spec.kind, test[k].user_id, test[k].item_id, *index, spec.options);
    });

    ReportRow row;
    row.name = spec.label;
    row.kind = spec.kind;
    std::vector<PredictionPair> pairs;
    pairs.reserve(test.size());
    for (std::size_t k = 0; k < test.size(); ++k) {
      double value = preds[k].value;
      if (config.round_all && !is_user_item(spec.kind)) value = std::floor(value + 0.5);
      pairs.push_back({value, static_cast<double>(test[k].rating)});
      row.fallbacks.add(preds[k].fallback);
      result.log.push_back({spec.label, test[k].user_id, test[k].item_id, value,
                            static_cast<double>(test[k].rating), preds[k].fallback});
    }
    row.n_predictions = pairs.size();
    row.mae = mae(pairs);
    row.rmse = rmse(pairs);
    result.report.rows.push_back(std::move(row));
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const PreparedData data = prepare_data(config);
  return evaluate_predictors(config, data);
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  const auto& d = report.dataset;
  out << "dataset: " << d.source << "\n"
      << "reviews: loaded " << d.n_loaded << " (" << d.n_parse_errors << " malformed skipped), "
      << "after prune(k=" << d.prune_k << ") " << d.n_after_prune << ", after sample "
      << d.n_after_sample << ", train " << d.n_train << ", test " << d.n_test << "\n"
      << "normalization: " << (d.normalization ? "on" : "off")
      << "   config: " << hex64(report.config_hash) << "\n\n";
  out << std::left << std::setw(14) << "Algorithm" << std::right << std::setw(9) << "MAE"
      << std::setw(9) << "RMSE" << std::setw(9) << "n" << "   fallback user/item/global\n";
  out << std::string(72, '-') << '\n';
  for (const ReportRow& row : report.rows) {
    out << std::left << std::setw(14) << row.name << std::right;
    if (row.error) {
      out << "   error: " << *row.error << '\n';
      continue;
    }
    out << std::fixed << std::setprecision(4) << std::setw(9) << row.mae << std::setw(9)
        << row.rmse << std::setw(9) << row.n_predictions << "   " << row.fallbacks.user_mean
        << '/' << row.fallbacks.item_mean << '/' << row.fallbacks.global_mean << '\n';
    out.unsetf(std::ios::fixed);
  }
}

void write_comparison_table(std::ostream& out, std::span<const std::string> labels,
                            std::span<const EvalReport> reports) {
  out << std::left << std::setw(14) << "Algorithm" << std::right;
  for (const auto& label : labels) out << std::setw(20) << label;
  out << '\n' << std::setw(14) << "";
  for (std::size_t k = 0; k < labels.size(); ++k) out << std::setw(10) << "MAE" << std::setw(10) << "RMSE";
  out << '\n';
  if (reports.empty()) return;
  for (std::size_t r = 0; r < reports[0].rows.size(); ++r) {
    out << std::left << std::setw(14) << reports[0].rows[r].name << std::right << std::fixed
        << std::setprecision(4);
    for (const auto& rep : reports) {
      if (r >= rep.rows.size() || rep.rows[r].error) {
        out << std::setw(10) << "-" << std::setw(10) << "-";
      } else {
        out << std::setw(10) << rep.rows[r].mae << std::setw(10) << rep.rows[r].rmse;
      }
    }
    out.unsetf(std::ios::fixed);
    out << '\n';
  }
}

std::string report_to_json(const EvalReport& report) {
  using nlohmann::json;
  const auto& d = report.dataset;
  json ds = {{"source", d.source},
             {"n_loaded", d.n_loaded},
             {"n_parse_errors", d.n_parse_errors},
             {"n_after_prune", d.n_after_prune},
             {"n_after_sample", d.n_after_sample},
             {"n_train", d.n_train},
             {"n_test", d.n_test},
             {"prune_k", d.prune_k},
             {"stage_order", to_string(d.stage_order)},
             {"train_fraction", d.train_fraction},
             {"split_seed", d.split_seed},
             {"normalization", d.normalization},
             {"provenance", d.provenance}};
  if (d.sample) {
    ds["sample"] = {{"n", d.sample->n},
                    {"distribution", std::vector<double>(d.sample->distribution.begin(),
                                                         d.sample->distribution.end())},
                    {"seed", d.sample->seed}};
  }
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row = {{"predictor", r.name}, {"method", predictor_name(r.kind)}};
    if (r.error) {
      row["error"] = *r.error;
    } else {
      row["mae"] = r.mae;
      row["rmse"] = r.rmse;
      row["n_predictions"] = r.n_predictions;
      row["fallbacks"] = {{"none", r.fallbacks.none},
                          {"user_mean", r.fallbacks.user_mean},
                          {"item_mean", r.fallbacks.item_mean},
                          {"global_mean", r.fallbacks.global_mean}};
    }
    rows.push_back(std::move(row));
  }
  json j = {{"dataset", ds}, {"rows", rows}, {"config_hash", hex64(report.config_hash)}};
  return j.dump(2);
}

void write_prediction_log(std::ostream& out, std::span<const PredictionRecord> log) {
  out << "predictor\tuser\titem\tpredicted\tactual\tfallback\n";
  for (const auto& r : log) {
    out << r.predictor << '\t' << r.user << '\t' << r.item << '\t' << format_double(r.predicted)
        << '\t' << format_double(r.actual) << '\t' << fallback_name(r.fallback) << '\n';
  }
}

std::vector<PredictionRecord> read_prediction_log(std::istream& in) {
  std::vector<PredictionRecord> log;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (std::size_t tab; (tab = rest.find('\t')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, tab));
      rest.remove_prefix(tab + 1);
    }
    f.push_back(rest);
    if (f.size() != 6) throw DataError("prediction log line has " + std::to_string(f.size()) + " fields");
    PredictionRecord r;
    r.predictor = f[0];
    r.user = f[1];
    r.item = f[2];
    std::from_chars(f[3].data(), f[3].data() + f[3].size(), r.predicted);
    std::from_chars(f[4].data(), f[4].data() + f[4].size(), r.actual);
    for (Fallback fb : {Fallback::none, Fallback::user_mean, Fallback::item_mean, Fallback::global_mean}) {
      if (fallback_name(fb) == f[5]) r.fallback = fb;
    }
    log.push_back(std::move(r));
  }
  return log;
}

std::vector<ReportRow> metrics_from_log(std::span<const PredictionRecord> log) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<PredictionPair>> pairs;
  std::map<std::string, FallbackCounts> fallbacks;
  for (const auto& r : log) {
    auto [it, inserted] = pairs.try_emplace(r.predictor);
    if (inserted) order.push_back(r.predictor);
    it->second.push_back({r.predicted, r.actual});
    fallbacks[r.predictor].add(r.fallback);
  }
  std::vector<ReportRow> rows;
  for (const auto& name : order) {
    ReportRow row;
    row.name = name;
    row.mae = mae(pairs[name]);
    row.rmse = rmse(pairs[name]);
    row.n_predictions = pairs[name].size();
    row.fallbacks = fallbacks[name];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace revpred
