#include "revpred/profiles.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "revpred/errors.hpp"

namespace revpred {

struct RatingBuckets::Slot {
  struct Entry {
    std::once_flag once;
    std::unique_ptr<const BucketVectors> value;
  };
  // Indexed by star_index(r) * 2 + weighting.
  std::array<Entry, kNumStars * 2> entries;
};

void RatingBuckets::SlotDeleter::operator()(Slot* p) const { delete p; }

RatingBuckets::RatingBuckets() : cache_(new Slot) {}

const BucketVectors& RatingBuckets::vectors(int star, Weighting weighting,
                                            const IdfTable& idf) const {
  const std::size_t s = star_index(star);
  auto& entry = cache_->entries[s * 2 + (weighting == Weighting::tfidf ? 1 : 0)];
  std::call_once(entry.once, [&] {
    const IdfTable* table = weighting == Weighting::tfidf ? &idf : nullptr;
    auto v = std::make_unique<BucketVectors>();
    const Bucket& b = buckets_[s];
    v->concat = TermVector::from_tokens(b.concat, table);
    v->reviews.reserve(b.reviews.size());
    for (const auto& r : b.reviews) v->reviews.push_back(TermVector::from_tokens(r, table));
    entry.value = std::move(v);
  });
  return *entry.value;
}

std::size_t RatingBuckets::review_count() const {
  std::size_t n = 0;
  for (const auto& b : buckets_) n += b.reviews.size();
  return n;
}

const UserProfile* ProfileIndex::find_user(std::string_view id) const {
  auto it = users_.find(id);
  return it == users_.end() ? nullptr : &it->second;
}

const ItemProfile* ProfileIndex::find_item(std::string_view id) const {
  auto it = items_.find(id);
  return it == items_.end() ? nullptr : &it->second;
}

std::span<const Rater> ProfileIndex::raters(std::string_view item) const {
  auto it = item_raters_.find(item);
  if (it == item_raters_.end()) return {};
  return it->second;
}

namespace {

// Fills `buckets` from the reviews at `members`, concatenating in
// (timestamp, input position) order, and returns the mean star.
double fill_buckets(RatingBuckets& buckets, std::vector<std::size_t>& members,
                    std::span<const NormalizedReview> reviews) {
  std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
    if (reviews[a].timestamp != reviews[b].timestamp) {
      return reviews[a].timestamp < reviews[b].timestamp;
    }
    return a < b;
  });
  double sum = 0.0;
  for (std::size_t idx : members) {
    const NormalizedReview& r = reviews[idx];
    Bucket& b = buckets.at(r.rating);
    b.reviews.push_back(r.tokens);
    b.concat.insert(b.concat.end(), r.tokens.begin(), r.tokens.end());
    sum += r.rating;
  }
  return sum / static_cast<double>(members.size());
}

}  // namespace

ProfileIndex ProfileIndex::assemble(Vocabulary vocab, std::vector<NormalizedReview> reviews) {
  if (reviews.empty()) throw std::invalid_argument("ProfileIndex: no training reviews");
  ProfileIndex index;
  index.vocab_ = std::move(vocab);
  index.reviews_ = std::move(reviews);
  const auto& rs = index.reviews_;

  std::map<std::string_view, std::vector<std::size_t>> by_user, by_item;
  double total = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!is_valid_star(rs[i].rating)) throw std::invalid_argument("ProfileIndex: bad star");
    by_user[rs[i].user_id].push_back(i);
    by_item[rs[i].item_id].push_back(i);
    total += rs[i].rating;
  }
  index.global_mean_ = total / static_cast<double>(rs.size());

  for (auto& [id, members] : by_user) {
    UserProfile p;
    p.id = std::string(id);
    p.mean_rating = fill_buckets(p.buckets, members, rs);
    for (std::size_t idx : members) p.rated[rs[idx].item_id] = rs[idx].rating;
    index.users_.emplace(p.id, std::move(p));
  }
  for (auto& [id, members] : by_item) {
    ItemProfile p;
    p.id = std::string(id);
    p.mean_rating = fill_buckets(p.buckets, members, rs);
    std::vector<Rater> raters;
    raters.reserve(members.size());
    for (std::size_t idx : members) raters.push_back({rs[idx].user_id, rs[idx].rating});
    std::sort(raters.begin(), raters.end(),
              [](const Rater& a, const Rater& b) { return a.user_id < b.user_id; });
    index.item_raters_.emplace(p.id, std::move(raters));
    index.items_.emplace(p.id, std::move(p));
  }

  std::vector<std::vector<TermId>> docs;
  docs.reserve(rs.size());
  for (const auto& r : rs) docs.push_back(r.tokens);
  index.idf_ = build_idf(docs);
  return index;
}

ProfileIndex build_profiles(const Dataset& train, const NormConfig& config) {
  if (train.empty()) throw DataError("cannot build profiles from an empty training split");
  Vocabulary vocab;
  std::vector<NormalizedReview> reviews;
  reviews.reserve(train.size());
  for (const Review& r : train.reviews) {
    const TokenList tokens = normalize(r.text, config);
    reviews.push_back({r.user_id, r.item_id, r.rating, r.timestamp, vocab.intern_all(tokens)});
  }
  return ProfileIndex::assemble(std::move(vocab), std::move(reviews));
}

}  // namespace revpred
