#include "revpred/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "revpred/errors.hpp"
#include "revpred/random.hpp"
#include "utf8.hpp"

namespace revpred {
namespace {

constexpr std::string_view kProductId = "product/productId";
constexpr std::string_view kUserId = "review/userId";
constexpr std::string_view kProfileName = "review/profileName";
constexpr std::string_view kHelpfulness = "review/helpfulness";
constexpr std::string_view kScore = "review/score";
constexpr std::string_view kTime = "review/time";
constexpr std::string_view kSummary = "review/summary";
constexpr std::string_view kText = "review/text";

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return utf8::is_ascii_space(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && utf8::is_ascii_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && utf8::is_ascii_space(s.back())) s.remove_suffix(1);
  return s;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  Int value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  return value;
}

// Raw key/value slots of the record currently being read.
struct PendingRecord {
  std::size_t start_line = 0;
  std::optional<std::string> product_id, user_id, profile_name, helpfulness, score, time,
      summary, text;
  std::vector<std::string> problems;

  bool started() const { return start_line != 0; }
};

std::optional<std::string>* slot_for(PendingRecord& rec, std::string_view key) {
  if (key == kProductId) return &rec.product_id;
  if (key == kUserId) return &rec.user_id;
  if (key == kProfileName) return &rec.profile_name;
  if (key == kHelpfulness) return &rec.helpfulness;
  if (key == kScore) return &rec.score;
  if (key == kTime) return &rec.time;
  if (key == kSummary) return &rec.summary;
  if (key == kText) return &rec.text;
  return nullptr;
}

std::optional<int> parse_score(std::string_view s, std::string& problem) {
  s = trim(s);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    problem = "unparseable review/score '" + std::string(s) + "'";
    return std::nullopt;
  }
  if (std::floor(value) != value) {
    problem = "non-integral review/score '" + std::string(s) + "'";
    return std::nullopt;
  }
  if (value < kMinStar || value > kMaxStar) {
    problem = "review/score '" + std::string(s) + "' outside 1..5";
    return std::nullopt;
  }
  return static_cast<int>(value);
}

std::optional<Review> finish_record(PendingRecord& rec) {
  auto& problems = rec.problems;
  for (auto [slot, key] : {std::pair{&rec.product_id, kProductId}, {&rec.user_id, kUserId},
                           {&rec.score, kScore}, {&rec.text, kText}}) {
    if (!slot->has_value()) problems.push_back("missing " + std::string(key));
  }
  Review r;
  if (rec.product_id) {
    r.item_id = std::string(trim(*rec.product_id));
    if (r.item_id.empty()) problems.push_back("empty product/productId");
  }
  if (rec.user_id) {
    r.user_id = std::string(trim(*rec.user_id));
    if (r.user_id.empty()) problems.push_back("empty review/userId");
  }
  if (rec.score) {
    std::string problem;
    if (auto star = parse_score(*rec.score, problem)) {
      r.rating = *star;
    } else {
      problems.push_back(std::move(problem));
    }
  }
  if (rec.helpfulness) {
    const std::string_view h = trim(*rec.helpfulness);
    const auto slash = h.find('/');
    std::optional<std::int64_t> found, total;
    if (slash != std::string_view::npos) {
      found = parse_int<std::int64_t>(h.substr(0, slash));
      total = parse_int<std::int64_t>(h.substr(slash + 1));
    }
    if (!found || !total || *found < 0 || *total < 0) {
      problems.push_back("malformed review/helpfulness '" + std::string(h) + "'");
    } else if (*found > *total) {
      problems.push_back("review/helpfulness found > total in '" + std::string(h) + "'");
    } else {
      r.helpfulness = {*found, *total};
    }
  }
  if (rec.time) {
    if (auto t = parse_int<std::int64_t>(*rec.time)) {
      r.timestamp = *t;
    } else {
      problems.push_back("malformed review/time '" + std::string(trim(*rec.time)) + "'");
    }
  }
  if (rec.profile_name) r.profile_name = std::move(*rec.profile_name);
  if (rec.summary) r.summary = std::move(*rec.summary);
  if (rec.text) r.text = std::move(*rec.text);
  if (!problems.empty()) return std::nullopt;
  return r;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Count of alive reviews per user or item.
using DegreeMap = std::unordered_map<std::string_view, std::size_t>;

}  // namespace

ParseResult parse_snap_stream(std::istream& in) {
  ParseResult result;
  PendingRecord rec;
  std::size_t record_ordinal = 0;

  auto flush = [&] {
    if (!rec.started()) return;
    if (auto review = finish_record(rec)) {
      result.reviews.push_back(std::move(*review));
    } else {
      result.errors.push_back(
          {rec.start_line, record_ordinal,
           "record #" + std::to_string(record_ordinal + 1) + " at line " +
               std::to_string(rec.start_line) + ": " + join(rec.problems, "; ")});
    }
    ++record_ordinal;
    rec = PendingRecord{};
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (is_blank(raw)) {
      flush();
      continue;
    }
    if (!rec.started()) rec.start_line = line_no;
    const std::string line = utf8::sanitize(raw);
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      rec.problems.push_back("line " + std::to_string(line_no) + " has no key");
      continue;
    }
    const std::string_view key = trim(std::string_view(line).substr(0, colon));
    std::string_view value = std::string_view(line).substr(colon + 1);
    if (!value.empty() && value.front() == ' ') value.remove_prefix(1);
    if (auto* slot = slot_for(rec, key)) *slot = std::string(value);
  }
  flush();
  return result;
}

void write_snap(std::ostream& out, std::span<const Review> reviews) {
  for (const Review& r : reviews) {
    out << kProductId << ": " << r.item_id << '\n'
        << kUserId << ": " << r.user_id << '\n'
        << kProfileName << ": " << r.profile_name << '\n'
        << kHelpfulness << ": " << r.helpfulness.found << '/' << r.helpfulness.total << '\n'
        << kScore << ": " << r.rating << ".0\n"
        << kTime << ": " << r.timestamp << '\n'
        << kSummary << ": " << r.summary << '\n'
        << kText << ": " << r.text << "\n\n";
  }
}

Dataset make_dataset(std::vector<Review> reviews, std::string origin) {
  // (user, item) -> index of the review currently kept for that pair.
  std::unordered_map<std::string, std::size_t> latest;
  latest.reserve(reviews.size());
  std::vector<bool> keep(reviews.size(), true);
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    std::string key = reviews[i].user_id;
    key.push_back('\x1f');
    key += reviews[i].item_id;
    auto [it, inserted] = latest.try_emplace(std::move(key), i);
    if (inserted) continue;
    if (reviews[i].timestamp >= reviews[it->second].timestamp) {
      keep[it->second] = false;
      it->second = i;
    } else {
      keep[i] = false;
    }
  }
  Dataset ds;
  ds.reviews.reserve(latest.size());
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    if (keep[i]) ds.reviews.push_back(std::move(reviews[i]));
  }
  const std::size_t dropped = reviews.size() - ds.reviews.size();
  ds.provenance.push_back(std::move(origin));
  if (dropped > 0) {
    ds.provenance.push_back("deduplicated (user, item) pairs: dropped " +
                            std::to_string(dropped));
  }
  return ds;
}

Dataset prune_min_ratings(const Dataset& dataset, int k) {
  if (k < 1) throw std::invalid_argument("prune_min_ratings: k must be >= 1");
  const auto need = static_cast<std::size_t>(k);
  std::vector<bool> alive(dataset.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    DegreeMap user_deg, item_deg;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (!alive[i]) continue;
      ++user_deg[dataset.reviews[i].user_id];
      ++item_deg[dataset.reviews[i].item_id];
    }
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (!alive[i]) continue;
      const Review& r = dataset.reviews[i];
      if (user_deg[r.user_id] < need || item_deg[r.item_id] < need) {
        alive[i] = false;
        changed = true;
      }
    }
  }
  Dataset out;
  out.provenance = dataset.provenance;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (alive[i]) out.reviews.push_back(dataset.reviews[i]);
  }
  out.provenance.push_back("pruned to min " + std::to_string(k) + " ratings per user/item: " +
                           std::to_string(dataset.size()) + " -> " +
                           std::to_string(out.size()) + " reviews");
  return out;
}

StarCounts allocate_star_counts(std::size_t n, const StarDistribution& dist) {
  StarCounts counts{};
  std::array<double, kNumStars> fraction{};
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < kNumStars; ++s) {
    if (dist[s] < 0.0) throw std::invalid_argument("star distribution has a negative entry");
    const double exact = static_cast<double>(n) * dist[s];
    // Absorb representation error so that 0.33 * 100 counts as 33.
    const double whole = std::floor(exact + 1e-9);
    counts[s] = static_cast<std::size_t>(whole);
    fraction[s] = std::max(0.0, exact - whole);
    assigned += counts[s];
  }
  if (assigned > n) throw std::invalid_argument("star distribution sums to more than 1");
  std::array<std::size_t, kNumStars> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (fraction[a] != fraction[b]) return fraction[a] > fraction[b];
    return a > b;
  });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[order[k % kNumStars]];
  return counts;
}

Dataset stratified_sample(const Dataset& dataset, std::size_t n, const StarDistribution& dist,
                          std::uint64_t seed) {
  const StarCounts want = allocate_star_counts(n, dist);
  std::array<std::vector<std::size_t>, kNumStars> by_star;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    by_star[star_index(dataset.reviews[i].rating)].push_back(i);
  }
  // Checked from 5 stars down so the error names the most visible shortfall first.
  for (std::size_t s = kNumStars; s-- > 0;) {
    if (by_star[s].size() < want[s]) {
      throw DataError("infeasible sample: need " + std::to_string(want[s]) + " reviews with " +
                      std::to_string(s + 1) + " stars but the dataset has only " +
                      std::to_string(by_star[s].size()));
    }
  }
  SeededRng rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  for (std::size_t s = 0; s < kNumStars; ++s) {
    auto& pool = by_star[s];
    // Partial Fisher-Yates: the first want[s] slots are a uniform draw.
    for (std::size_t k = 0; k < want[s]; ++k) {
      const auto j = k + static_cast<std::size_t>(rng.below(pool.size() - k));
      std::swap(pool[k], pool[j]);
      chosen.push_back(pool[k]);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  Dataset out;
  out.provenance = dataset.provenance;
  out.reviews.reserve(chosen.size());
  for (std::size_t i : chosen) out.reviews.push_back(dataset.reviews[i]);
  out.provenance.push_back("stratified sample of " + std::to_string(n) + " (1..5 stars: " +
                           std::to_string(want[0]) + "/" + std::to_string(want[1]) + "/" +
                           std::to_string(want[2]) + "/" + std::to_string(want[3]) + "/" +
                           std::to_string(want[4]) + ") seed " + std::to_string(seed));
  return out;
}

TrainTestSplit split_train_test(const Dataset& dataset, double train_fraction,
                                std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split_train_test: fraction must lie in (0, 1)");
  }
  const std::size_t n = dataset.size();
  const auto n_train = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n))));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<bool> in_train(n, false);
  for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = true;

  TrainTestSplit split;
  split.train.provenance = dataset.provenance;
  split.test.provenance = dataset.provenance;
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? split.train : split.test).reviews.push_back(dataset.reviews[i]);
  }
  const std::string note = "split " + std::to_string(split.train.size()) + " train / " +
                           std::to_string(split.test.size()) + " test, seed " +
                           std::to_string(seed);
  split.train.provenance.push_back(note + " (train half)");
  split.test.provenance.push_back(note + " (test half)");
  return split;
}

DatasetStats compute_stats(const Dataset& dataset) {
  DatasetStats stats;
  stats.n_reviews = dataset.size();
  DegreeMap users, items;
  std::vector<std::size_t> words;
  words.reserve(dataset.size());
  for (const Review& r : dataset.reviews) {
    ++users[r.user_id];
    ++items[r.item_id];
    if (is_valid_star(r.rating)) ++stats.rating_histogram[star_index(r.rating)];
    std::size_t count = 0;
    bool in_word = false;
    for (char c : r.text) {
      const bool space = utf8::is_ascii_space(c);
      if (!space && !in_word) ++count;
      in_word = !space;
    }
    words.push_back(count);
  }
  stats.n_users = users.size();
  stats.n_items = items.size();
  if (!words.empty()) {
    std::sort(words.begin(), words.end());
    const std::size_t mid = words.size() / 2;
    stats.median_words_per_review =
        words.size() % 2 == 1 ? words[mid] : (words[mid - 1] + words[mid]) / 2;
  }
  return stats;
}

StarDistribution star_proportions(const Dataset& dataset) {
  StarDistribution p{};
  if (dataset.empty()) return p;
  for (const Review& r : dataset.reviews) p[star_index(r.rating)] += 1.0;
  for (double& x : p) x /= static_cast<double>(dataset.size());
  return p;
}

std::uint64_t fingerprint(const Dataset& dataset) {
  std::uint64_t h = fnv1a64("revpred-dataset");
  auto mix = [&h](std::string_view s) {
    h = fnv1a64(s, h);
    h = fnv1a64(std::string_view("\x1f", 1), h);
  };
  for (const Review& r : dataset.reviews) {
    mix(r.user_id);
    mix(r.item_id);
    mix(r.profile_name);
    mix(std::to_string(r.rating));
    mix(std::to_string(r.helpfulness.found));
    mix(std::to_string(r.helpfulness.total));
    mix(std::to_string(r.timestamp));
    mix(r.summary);
    mix(r.text);
  }
  return h;
}

}  // namespace revpred
