#include "revpred/predictors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "revpred/errors.hpp"
#include "revpred/random.hpp"

namespace revpred {
namespace {

struct NamedPredictor {
  PredictorKind kind;
  std::string_view name;
};

constexpr NamedPredictor kNames[] = {
    {PredictorKind::cm, "CM"},
    {PredictorKind::mcm, "MCM"},
    {PredictorKind::acm, "ACM"},
    {PredictorKind::cf_mcm, "CF-MCM"},
    {PredictorKind::cf_acm, "CF-ACM"},
    {PredictorKind::cf_pearson, "CF-Pearson"},
    {PredictorKind::cf_cosine, "CF-Cosine"},
    {PredictorKind::base, "base"},
    {PredictorKind::random, "random"},
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

double clamp_star(double x) { return std::clamp(x, double(kMinStar), double(kMaxStar)); }

double round_half_up(double x) { return std::floor(x + 0.5); }

// The cold-start cascade: user mean, then item mean, then global mean.
Prediction fall_back(PredictorKind method, const UserProfile* user, const ItemProfile* item,
                     const ProfileIndex& index, bool round_to_star) {
  Prediction p;
  p.method = method;
  if (user) {
    p.value = user->mean_rating;
    p.fallback = Fallback::user_mean;
  } else if (item) {
    p.value = item->mean_rating;
    p.fallback = Fallback::item_mean;
  } else {
    p.value = index.global_mean();
    p.fallback = Fallback::global_mean;
  }
  p.value = clamp_star(round_to_star ? round_half_up(p.value) : p.value);
  return p;
}

int pick_star(const std::array<double, kNumStars>& sims, double user_mean, TieBreak tie_break) {
  const double best = *std::max_element(sims.begin(), sims.end());
  int chosen = 0;
  for (int r : kStars) {
    if (sims[star_index(r)] != best) continue;
    if (chosen == 0) {
      chosen = r;
      continue;
    }
    // r > chosen here, so "larger star" wins every remaining tie.
    if (tie_break == TieBreak::larger_star ||
        std::abs(r - user_mean) <= std::abs(chosen - user_mean)) {
      chosen = r;
    }
  }
  return chosen;
}

SimilarityVariant per_review_variant(TextCfVariant v) {
  return v == TextCfVariant::cf_mcm ? SimilarityVariant::mcm : SimilarityVariant::acm;
}

PredictorKind kind_of(TextCfVariant v) {
  return v == TextCfVariant::cf_mcm ? PredictorKind::cf_mcm : PredictorKind::cf_acm;
}

PredictorKind kind_of(RatingSimilarity s) {
  return s == RatingSimilarity::pearson ? PredictorKind::cf_pearson : PredictorKind::cf_cosine;
}

// Shared tail of every neighbourhood predictor.
Prediction finish_cf(PredictorKind method, const UserProfile* user, const ItemProfile* item,
                     std::span<const NeighborRating> terms, const ProfileIndex& index,
                     const PredictorOptions& options) {
  if (!user) return fall_back(method, user, item, index, false);
  const auto value = aggregate_neighbors(user->mean_rating, terms);
  if (!value) return fall_back(method, user, item, index, false);
  Prediction p;
  p.method = method;
  p.value = options.clamp ? clamp_star(*value) : *value;
  return p;
}

// Keeps the k heaviest neighbours (by |w|, ties by user id), restoring id order.
template <typename T, typename WeightOf>
void keep_top_k(std::vector<T>& xs, std::optional<std::size_t> k, WeightOf weight_of) {
  if (!k || xs.size() <= *k) return;
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(weight_of(xs[a])) > std::abs(weight_of(xs[b]));
  });
  order.resize(*k);
  std::sort(order.begin(), order.end());
  std::vector<T> kept;
  kept.reserve(*k);
  for (std::size_t i : order) kept.push_back(std::move(xs[i]));
  xs = std::move(kept);
}

}  // namespace

std::string_view predictor_name(PredictorKind kind) {
  for (const auto& n : kNames) {
    if (n.kind == kind) return n.name;
  }
  return "?";
}

PredictorKind parse_predictor(std::string_view name) {
  for (const auto& n : kNames) {
    if (iequals(n.name, name)) return n.kind;
  }
  std::string valid;
  for (const auto& n : kNames) {
    if (!valid.empty()) valid += ", ";
    valid += n.name;
  }
  throw ConfigError("unknown predictor '" + std::string(name) + "'; valid names: " + valid);
}

std::string_view fallback_name(Fallback f) {
  switch (f) {
    case Fallback::none: return "none";
    case Fallback::user_mean: return "user_mean";
    case Fallback::item_mean: return "item_mean";
    case Fallback::global_mean: return "global_mean";
  }
  return "?";
}

double bucket_similarity(const BucketVectors& a, const BucketVectors& b,
                         SimilarityVariant variant) {
  if (a.reviews.empty() || b.reviews.empty()) return 0.0;
  if (variant == SimilarityVariant::cm) return cosine(a.concat, b.concat);
  double best = 0.0, sum = 0.0;
  for (const TermVector& x : a.reviews) {
    for (const TermVector& y : b.reviews) {
      const double c = cosine(x, y);
      best = std::max(best, c);
      sum += c;
    }
  }
  if (variant == SimilarityVariant::mcm) return best;
  return sum / static_cast<double>(a.reviews.size() * b.reviews.size());
}

double bucket_similarity(const RatingBuckets& a, const RatingBuckets& b, int star,
                         SimilarityVariant variant, const ProfileIndex& index,
                         Weighting weighting) {
  return bucket_similarity(a.vectors(star, weighting, index.idf()),
                           b.vectors(star, weighting, index.idf()), variant);
}

Prediction predict_user_item(std::string_view user, std::string_view item,
                             SimilarityVariant variant, const ProfileIndex& index,
                             const PredictorOptions& options) {
  const PredictorKind method = variant == SimilarityVariant::cm    ? PredictorKind::cm
                               : variant == SimilarityVariant::mcm ? PredictorKind::mcm
                                                                   : PredictorKind::acm;
  const UserProfile* u = index.find_user(user);
  const ItemProfile* i = index.find_item(item);
  if (!u || !i) return fall_back(method, u, i, index, true);

  std::array<double, kNumStars> sims{};
  for (int r : kStars) {
    sims[star_index(r)] =
        bucket_similarity(u->buckets, i->buckets, r, variant, index, options.weighting);
  }
  Prediction p;
  if (std::all_of(sims.begin(), sims.end(), [](double s) { return s == 0.0; })) {
    p = fall_back(method, u, i, index, true);
  } else {
    p.method = method;
    p.value = pick_star(sims, u->mean_rating, options.tie_break);
  }
  p.similarities = sims;
  return p;
}

double text_cf_weight(const UserProfile& u, const UserProfile& v, TextCfVariant variant,
                      const ProfileIndex& index, const PredictorOptions& options) {
  double best = 0.0, sum = 0.0;
  std::size_t shared = 0;
  for (int r : kStars) {
    if (u.buckets.at(r).empty() || v.buckets.at(r).empty()) continue;
    ++shared;
    const auto& a = u.buckets.vectors(r, options.weighting, index.idf());
    const auto& b = v.buckets.vectors(r, options.weighting, index.idf());
    const double s = options.cf_comparison == CfComparison::concatenated
                         ? cosine(a.concat, b.concat)
                         : bucket_similarity(a, b, per_review_variant(variant));
    best = std::max(best, s);
    sum += s;
  }
  if (variant == TextCfVariant::cf_mcm) return best;
  if (options.cf_acm_averaging == CfAcmAveraging::all_stars) return sum / double(kNumStars);
  return shared == 0 ? 0.0 : sum / static_cast<double>(shared);
}

std::vector<NeighborWeight> text_cf_neighbors(std::string_view user, std::string_view item,
                                              TextCfVariant variant, const ProfileIndex& index,
                                              const PredictorOptions& options) {
  std::vector<NeighborWeight> out;
  const UserProfile* u = index.find_user(user);
  if (!u) return out;
  for (const Rater& rater : index.raters(item)) {
    if (rater.user_id == user) continue;
    const UserProfile* v = index.find_user(rater.user_id);
    out.push_back({rater.user_id, text_cf_weight(*u, *v, variant, index, options)});
  }
  keep_top_k(out, options.top_k, [](const NeighborWeight& n) { return n.weight; });
  return out;
}

std::optional<double> aggregate_neighbors(double user_mean,
                                          std::span<const NeighborRating> terms) {
  double num = 0.0, den = 0.0;
  for (const auto& t : terms) {
    num += t.weight * (t.rating - t.mean);
    den += std::abs(t.weight);
  }
  if (den == 0.0) return std::nullopt;
  return user_mean + num / den;
}

Prediction predict_user_user(std::string_view user, std::string_view item,
                             TextCfVariant variant, const ProfileIndex& index,
                             const PredictorOptions& options) {
  const UserProfile* u = index.find_user(user);
  const ItemProfile* i = index.find_item(item);
  std::vector<NeighborRating> terms;
  if (u && i) {
    for (const NeighborWeight& n : text_cf_neighbors(user, item, variant, index, options)) {
      const UserProfile* v = index.find_user(n.user_id);
      terms.push_back({n.weight, double(v->rated.find(item)->second), v->mean_rating});
    }
  }
  return finish_cf(kind_of(variant), u, i, terms, index, options);
}

double rating_similarity(const UserProfile& u, const UserProfile& v, RatingSimilarity sim,
                         std::size_t min_overlap) {
  std::vector<std::pair<double, double>> pairs;
  auto a = u.rated.begin();
  auto b = v.rated.begin();
  while (a != u.rated.end() && b != v.rated.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      pairs.emplace_back(a->second, b->second);
      ++a;
      ++b;
    }
  }
  if (pairs.size() < std::max<std::size_t>(min_overlap, 1)) return 0.0;
  double mx = 0.0, my = 0.0;
  if (sim == RatingSimilarity::pearson) {
    for (auto [x, y] : pairs) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pairs.size());
    my /= static_cast<double>(pairs.size());
  }
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (auto [x, y] : pairs) {
    xy += (x - mx) * (y - my);
    xx += (x - mx) * (x - mx);
    yy += (y - my) * (y - my);
  }
  if (xx == 0.0 || yy == 0.0) return 0.0;
  return std::clamp(xy / std::sqrt(xx * yy), -1.0, 1.0);
}

Prediction predict_cf_ratings(std::string_view user, std::string_view item,
                              RatingSimilarity sim, const ProfileIndex& index,
                              const PredictorOptions& options) {
  const UserProfile* u = index.find_user(user);
  const ItemProfile* i = index.find_item(item);
  std::vector<NeighborRating> terms;
  if (u && i) {
    for (const Rater& rater : index.raters(item)) {
      if (rater.user_id == user) continue;
      const UserProfile* v = index.find_user(rater.user_id);
      terms.push_back({rating_similarity(*u, *v, sim, options.min_overlap), double(rater.rating),
                       v->mean_rating});
    }
    keep_top_k(terms, options.top_k, [](const NeighborRating& t) { return t.weight; });
  }
  return finish_cf(kind_of(sim), u, i, terms, index, options);
}

Prediction predict_base_model(std::string_view user, std::string_view item,
                              const ProfileIndex& index, const PredictorOptions& options) {
  const UserProfile* u = index.find_user(user);
  const ItemProfile* i = index.find_item(item);
  const double mu = index.global_mean();
  const double bu = u ? u->mean_rating - mu : 0.0;
  const double bi = i ? i->mean_rating - mu : 0.0;
  Prediction p;
  p.method = PredictorKind::base;
  p.value = options.clamp ? clamp_star(mu + bu + bi) : mu + bu + bi;
  if (!u && !i) p.fallback = Fallback::global_mean;
  return p;
}

Prediction predict_random(std::string_view user, std::string_view item, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed);
  h = hash_combine(h, fnv1a64(user));
  h = hash_combine(h, fnv1a64(item));
  Prediction p;
  p.method = PredictorKind::random;
  p.value = static_cast<double>(kMinStar + static_cast<int>(h % kNumStars));
  return p;
}

Prediction predict(PredictorKind kind, std::string_view user, std::string_view item,
                   const ProfileIndex& index, const PredictorOptions& options) {
  switch (kind) {
    case PredictorKind::cm:
      return predict_user_item(user, item, SimilarityVariant::cm, index, options);
    case PredictorKind::mcm:
      return predict_user_item(user, item, SimilarityVariant::mcm, index, options);
    case PredictorKind::acm:
      return predict_user_item(user, item, SimilarityVariant::acm, index, options);
    case PredictorKind::cf_mcm:
      return predict_user_user(user, item, TextCfVariant::cf_mcm, index, options);
    case PredictorKind::cf_acm:
      return predict_user_user(user, item, TextCfVariant::cf_acm, index, options);
    case PredictorKind::cf_pearson:
      return predict_cf_ratings(user, item, RatingSimilarity::pearson, index, options);
    case PredictorKind::cf_cosine:
      return predict_cf_ratings(user, item, RatingSimilarity::cosine, index, options);
    case PredictorKind::base:
      return predict_base_model(user, item, index, options);
    case PredictorKind::random:
      return predict_random(user, item, options.random_seed);
  }
  throw ConfigError("unhandled predictor");
}

}  // namespace revpred
