#pragma once

// A deliberately naive second implementation of the predictors. It follows
// the prediction procedures line by line over plain string maps and shares
// nothing with the library beyond the option enums: no interning, no sparse
// vectors, no memoization, no profile index.

#include <string>
#include <vector>

#include "revpred/predictors.hpp"
#include "revpred/vectorspace.hpp"

namespace revpred::oracle {

struct NaiveReview {
  std::string user;
  std::string item;
  int rating = 0;
  std::vector<std::string> tokens;
};

struct NaiveResult {
  double value = 0.0;
  Fallback fallback = Fallback::none;
};

class NaiveModel {
 public:
  NaiveModel(std::vector<NaiveReview> train, Weighting weighting)
      : train_(std::move(train)), weighting_(weighting) {}

  NaiveResult user_item(const std::string& u, const std::string& i, SimilarityVariant v) const;
  NaiveResult user_user(const std::string& u, const std::string& i, TextCfVariant v,
                        CfAcmAveraging averaging) const;
  NaiveResult cf_ratings(const std::string& u, const std::string& i, RatingSimilarity s) const;
  NaiveResult base(const std::string& u, const std::string& i) const;

 private:
  const std::vector<NaiveReview> train_;
  const Weighting weighting_;
};

/// Dense cosine over the union of keys; 0 when either side is all zero.
double dense_cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace revpred::oracle
