#pragma once

// Rating predictors over a ProfileIndex.
//
// User-item (CM, MCM, ACM): compare the user's and the item's bucket for each
// star value and predict the star whose buckets are most similar.
// User-user (CF-MCM, CF-ACM): neighbourhood collaborative filtering where the
// neighbour weight comes from the users' bucket texts.
// Baselines: rating-vector CF (Pearson, cosine), bias model, uniform random.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revpred/profiles.hpp"
#include "revpred/stars.hpp"
#include "revpred/vectorspace.hpp"

namespace revpred {

enum class SimilarityVariant {
  cm,   // cosine of the concatenated bucket texts
  mcm,  // maximum pairwise review cosine
  acm,  // average pairwise review cosine
};

enum class TextCfVariant { cf_mcm, cf_acm };

enum class RatingSimilarity { pearson, cosine };

enum class PredictorKind { cm, mcm, acm, cf_mcm, cf_acm, cf_pearson, cf_cosine, base, random };

inline constexpr std::array<PredictorKind, 9> kAllPredictors = {
    PredictorKind::cm,         PredictorKind::mcm,       PredictorKind::acm,
    PredictorKind::cf_mcm,     PredictorKind::cf_acm,    PredictorKind::cf_pearson,
    PredictorKind::cf_cosine,  PredictorKind::base,      PredictorKind::random};

/// "CM", "MCM", "ACM", "CF-MCM", "CF-ACM", "CF-Pearson", "CF-Cosine", "base",
/// "random".
std::string_view predictor_name(PredictorKind kind);

/// Case-insensitive inverse of predictor_name. Throws ConfigError listing the
/// valid names.
PredictorKind parse_predictor(std::string_view name);

/// True for the argmax predictors, whose outputs are whole stars.
constexpr bool is_user_item(PredictorKind k) {
  return k == PredictorKind::cm || k == PredictorKind::mcm || k == PredictorKind::acm;
}

enum class Fallback { none, user_mean, item_mean, global_mean };

std::string_view fallback_name(Fallback f);

struct Prediction {
  double value = 0.0;
  PredictorKind method = PredictorKind::cm;
  Fallback fallback = Fallback::none;
  /// similarity_r for r = 1..5 (user-item predictors only).
  std::optional<std::array<double, kNumStars>> similarities;
};

struct NeighborWeight {
  std::string user_id;
  double weight = 0.0;
};

enum class TieBreak {
  nearest_user_mean,  // closest to the user's mean, then the larger star
  larger_star,
};

/// How CF-ACM averages the per-star similarities.
enum class CfAcmAveraging {
  shared_buckets,  // over stars where both users have reviews
  all_stars,       // always divide by 5
};

/// What CF-MCM / CF-ACM compare for each star.
enum class CfComparison {
  concatenated,  // cosine of the two concatenated buckets
  per_review,    // MCM (resp. ACM) over individual reviews
};

struct PredictorOptions {
  Weighting weighting = Weighting::tfidf;
  TieBreak tie_break = TieBreak::nearest_user_mean;
  CfAcmAveraging cf_acm_averaging = CfAcmAveraging::shared_buckets;
  CfComparison cf_comparison = CfComparison::concatenated;
  std::size_t min_overlap = 2;
  std::optional<std::size_t> top_k;  // unset = every rater of the item
  bool clamp = true;
  std::uint64_t random_seed = 0;
};

/// Similarity of two same-star buckets; 0 if either is empty.
double bucket_similarity(const BucketVectors& a, const BucketVectors& b,
                         SimilarityVariant variant);

/// Convenience overload that vectorizes both buckets through the index.
double bucket_similarity(const RatingBuckets& a, const RatingBuckets& b, int star,
                         SimilarityVariant variant, const ProfileIndex& index,
                         Weighting weighting);

Prediction predict_user_item(std::string_view user, std::string_view item,
                             SimilarityVariant variant, const ProfileIndex& index,
                             const PredictorOptions& options = {});

/// Text-based neighbour weight between two users.
double text_cf_weight(const UserProfile& u, const UserProfile& v, TextCfVariant variant,
                      const ProfileIndex& index, const PredictorOptions& options = {});

/// Neighbours of `user` among the raters of `item`, with their weights, in
/// the order used for aggregation. Applies top_k when set.
std::vector<NeighborWeight> text_cf_neighbors(std::string_view user, std::string_view item,
                                              TextCfVariant variant, const ProfileIndex& index,
                                              const PredictorOptions& options = {});

Prediction predict_user_user(std::string_view user, std::string_view item,
                             TextCfVariant variant, const ProfileIndex& index,
                             const PredictorOptions& options = {});

/// Similarity of two users' rating vectors over their co-rated items; 0 when
/// fewer than min_overlap items are shared or the value is undefined.
double rating_similarity(const UserProfile& u, const UserProfile& v, RatingSimilarity sim,
                         std::size_t min_overlap);

Prediction predict_cf_ratings(std::string_view user, std::string_view item,
                              RatingSimilarity sim, const ProfileIndex& index,
                              const PredictorOptions& options = {});

/// global mean + user bias + item bias.
Prediction predict_base_model(std::string_view user, std::string_view item,
                              const ProfileIndex& index, const PredictorOptions& options = {});

/// Uniform star from a keyed hash of (seed, user, item).
Prediction predict_random(std::string_view user, std::string_view item, std::uint64_t seed);

/// Dispatches on `kind`.
Prediction predict(PredictorKind kind, std::string_view user, std::string_view item,
                   const ProfileIndex& index, const PredictorOptions& options = {});

/// Aggregates neighbour deviations:
///   user_mean + sum(w * (r_vi - mean_v)) / sum(|w|)
/// Returns std::nullopt when sum(|w|) is zero.
struct NeighborRating {
  double weight;
  double rating;
  double mean;
};
std::optional<double> aggregate_neighbors(double user_mean, std::span<const NeighborRating> terms);

}  // namespace revpred
