#pragma once

// Review corpora: SNAP key:value ingestion, k-core pruning, stratified
// sampling, train/test splitting and summary statistics.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "revpred/stars.hpp"

namespace revpred {

struct Helpfulness {
  std::int64_t found = 0;
  std::int64_t total = 0;

  bool operator==(const Helpfulness&) const = default;
};

/// One parsed review record.
struct Review {
  std::string user_id;
  std::string item_id;
  std::string profile_name;
  int rating = 0;  // 1..5
  Helpfulness helpfulness;
  std::int64_t timestamp = 0;
  std::string summary;
  std::string text;

  bool operator==(const Review&) const = default;
};

/// A record that could not be turned into a Review. `line` is the 1-based
/// line where the record starts; `record` its 0-based ordinal in the stream.
struct ParseIssue {
  std::size_t line = 0;
  std::size_t record = 0;
  std::string message;
};

struct ParseResult {
  std::vector<Review> reviews;
  std::vector<ParseIssue> errors;
};

/// Parses the SNAP movie-review format: "key: value" lines, records separated
/// by blank lines. Unknown keys are ignored. Records missing productId,
/// userId, score or text, or carrying a non-integral / out-of-range score,
/// are reported in `errors` and skipped; parsing continues.
ParseResult parse_snap_stream(std::istream& in);

/// Writes reviews back in SNAP format. parse_snap_stream(write_snap(x)) == x
/// for any reviews whose fields contain no line breaks.
void write_snap(std::ostream& out, std::span<const Review> reviews);

/// One JSON object per line, fields mirroring Review.
void write_ndjson(std::ostream& out, std::span<const Review> reviews);
ParseResult read_ndjson(std::istream& in);

/// An ordered review collection plus a log of the operations that produced it.
struct Dataset {
  std::vector<Review> reviews;
  std::vector<std::string> provenance;

  std::size_t size() const { return reviews.size(); }
  bool empty() const { return reviews.empty(); }
};

/// Builds a dataset from raw records, dropping duplicate (user, item) pairs.
/// The latest review by timestamp wins (later in input order on ties);
/// survivors keep their input order.
Dataset make_dataset(std::vector<Review> reviews, std::string origin);

/// Reads a dataset file. SNAP text and NDJSON are both accepted; the format
/// is sniffed from the first non-blank character. Throws DataError if the
/// file cannot be opened. Record-level problems go to `issues` if given.
Dataset load_dataset(const std::filesystem::path& path,
                     std::vector<ParseIssue>* issues = nullptr);

/// Writes `dataset` as NDJSON. Throws DataError on I/O failure.
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

/// Iterated k-core: removes users and items with fewer than `k` reviews until
/// every survivor has at least `k`. Throws std::invalid_argument if k < 1.
Dataset prune_min_ratings(const Dataset& dataset, int k);

/// Per-star proportions, indexed by star_index(r).
using StarDistribution = std::array<double, kNumStars>;
using StarCounts = std::array<std::size_t, kNumStars>;

/// floor(n * p_r) per star, with the remainder handed out one at a time to
/// the largest fractional parts (ties go to the higher star).
StarCounts allocate_star_counts(std::size_t n, const StarDistribution& dist);

/// Draws exactly allocate_star_counts(n, dist) reviews per star, uniformly
/// without replacement within each star. The result keeps input order and is
/// a pure function of (dataset, n, dist, seed). Throws DataError naming the
/// first star the dataset cannot supply.
Dataset stratified_sample(const Dataset& dataset, std::size_t n,
                          const StarDistribution& dist, std::uint64_t seed);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

/// Record-level random split; |train| = round(fraction * n). Both halves keep
/// input order. Throws std::invalid_argument unless 0 < fraction < 1.
TrainTestSplit split_train_test(const Dataset& dataset, double train_fraction,
                                std::uint64_t seed);

struct DatasetStats {
  std::size_t n_reviews = 0;
  std::size_t n_users = 0;
  std::size_t n_items = 0;
  StarCounts rating_histogram{};
  std::size_t median_words_per_review = 0;
};

/// Median word count uses whitespace-delimited raw tokens; for an even
/// number of reviews it is the floor of the mean of the two middle values.
DatasetStats compute_stats(const Dataset& dataset);

/// Histogram proportions of `dataset` (all zero for an empty dataset).
StarDistribution star_proportions(const Dataset& dataset);

/// Order-sensitive fingerprint of every field of every review.
std::uint64_t fingerprint(const Dataset& dataset);

}  // namespace revpred
