#pragma once

// Random micro-corpora and their comparison against the naive oracle.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "revpred/corpus.hpp"

namespace revpred::testing {

/// 1..6 reviews by up to 3 users over up to 3 items, texts drawn from a
/// vocabulary of at most 8 words (possibly empty texts).
std::vector<Review> micro_corpus(std::uint64_t seed);

struct OracleComparison {
  std::size_t predictions = 0;  // number of (predictor, options, user, item) checks
  std::vector<std::string> mismatches;
};

/// Builds profiles from `train` with whitespace tokenization, then checks
/// every predictor on every user x item pair (including unknown ones)
/// against the naive oracle: exact for the integer-valued predictors, 1e-9
/// for the others.
OracleComparison compare_with_oracle(const std::vector<Review>& train);

}  // namespace revpred::testing
