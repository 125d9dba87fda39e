#pragma once

// Per-user and per-item review profiles: each profile splits its training
// reviews into five rating buckets, kept both per review and concatenated.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revpred/corpus.hpp"
#include "revpred/stars.hpp"
#include "revpred/textnorm.hpp"
#include "revpred/vectorspace.hpp"

namespace revpred {

/// The reviews of one profile that carry one star value.
struct Bucket {
  std::vector<std::vector<TermId>> reviews;  // one normalized token list per review
  std::vector<TermId> concat;                // all of `reviews`, in timestamp order

  bool empty() const { return reviews.empty(); }
};

/// Vector views of a bucket under one weighting.
struct BucketVectors {
  TermVector concat;
  std::vector<TermVector> reviews;
};

/// Five buckets plus a lazily filled vector cache. The cache is safe under
/// concurrent first use. Vectors are tied to the IdfTable passed on first
/// use for each weighting, which is always the owning index's table.
class RatingBuckets {
 public:
  RatingBuckets();

  Bucket& at(int star) { return buckets_[star_index(star)]; }
  const Bucket& at(int star) const { return buckets_[star_index(star)]; }

  const BucketVectors& vectors(int star, Weighting weighting, const IdfTable& idf) const;

  std::size_t review_count() const;

 private:
  struct Slot;
  struct SlotDeleter {
    void operator()(Slot* p) const;
  };

  std::array<Bucket, kNumStars> buckets_;
  std::unique_ptr<Slot, SlotDeleter> cache_;
};

struct UserProfile {
  std::string id;
  RatingBuckets buckets;
  double mean_rating = 0.0;
  std::map<std::string, int, std::less<>> rated;  // item id -> star
};

struct ItemProfile {
  std::string id;
  RatingBuckets buckets;
  double mean_rating = 0.0;
};

struct Rater {
  std::string user_id;
  int rating = 0;
};

/// A training review after normalization; the unit a snapshot stores.
struct NormalizedReview {
  std::string user_id;
  std::string item_id;
  int rating = 0;
  std::int64_t timestamp = 0;
  std::vector<TermId> tokens;
};

/// Everything the predictors read. Immutable once built.
class ProfileIndex {
 public:
  const UserProfile* find_user(std::string_view id) const;
  const ItemProfile* find_item(std::string_view id) const;
  const std::map<std::string, UserProfile, std::less<>>& users() const { return users_; }
  const std::map<std::string, ItemProfile, std::less<>>& items() const { return items_; }

  /// Users who rated `item` in training, ordered by user id.
  std::span<const Rater> raters(std::string_view item) const;

  const IdfTable& idf() const { return idf_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  double global_mean() const { return global_mean_; }
  std::size_t training_size() const { return reviews_.size(); }
  std::span<const NormalizedReview> normalized_reviews() const { return reviews_; }

  /// Assembles profiles from already-normalized reviews. Throws
  /// std::invalid_argument if `reviews` is empty.
  static ProfileIndex assemble(Vocabulary vocab, std::vector<NormalizedReview> reviews);

 private:
  ProfileIndex() = default;

  Vocabulary vocab_;
  std::vector<NormalizedReview> reviews_;
  std::map<std::string, UserProfile, std::less<>> users_;
  std::map<std::string, ItemProfile, std::less<>> items_;
  std::map<std::string, std::vector<Rater>, std::less<>> item_raters_;
  IdfTable idf_;
  double global_mean_ = 0.0;
};

/// Normalizes every training review once and assembles the index; the IDF
/// table is fitted on the individual training reviews. Throws DataError on an
/// empty training set.
ProfileIndex build_profiles(const Dataset& train, const NormConfig& config);

/// Binary snapshot of the normalized training set, tagged with a caller
/// supplied key (typically a hash of the dataset and NormConfig).
void save_snapshot(const std::filesystem::path& path, const ProfileIndex& index,
                   std::uint64_t key);

/// Returns std::nullopt when the file is missing, has another format version
/// or was written for a different key. Throws DataError on a corrupt file.
std::optional<ProfileIndex> load_snapshot(const std::filesystem::path& path, std::uint64_t key);

}  // namespace revpred
