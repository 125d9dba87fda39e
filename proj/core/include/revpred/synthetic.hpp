#pragma once

// Deterministic generator of SNAP-style movie review corpora for desk-scale
// experiments and tests.
//
// Users and items carry latent tastes and qualities; stars come from a noisy
// latent score cut at quantiles that reproduce `star_mix`. Review text mixes
// star-dependent sentiment phrases (which bleed into neighbouring stars),
// genre and cast vocabulary of the item, the reviewer's personal catchphrases,
// filler, slang, numbers, punctuation and random capitalization.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "revpred/corpus.hpp"

namespace revpred {

struct SyntheticCorpusSpec {
  std::size_t n_users = 1200;
  std::size_t n_items = 500;
  std::size_t n_reviews = 14000;
  StarDistribution star_mix = {0.08, 0.06, 0.10, 0.21, 0.55};
  std::uint64_t seed = 1;
};

/// Reviews in chronological order; no (user, item) pair repeats. Throws
/// std::invalid_argument if n_reviews exceeds n_users * n_items / 2.
std::vector<Review> generate_synthetic_corpus(const SyntheticCorpusSpec& spec);

}  // namespace revpred
