#include <benchmark/benchmark.h>

#include "revpred/corpus.hpp"
#include "revpred/predictors.hpp"
#include "revpred/profiles.hpp"
#include "revpred/random.hpp"
#include "revpred/synthetic.hpp"
#include "revpred/textnorm.hpp"

using namespace revpred;

namespace {

std::vector<Review> corpus(std::size_t n_reviews) {
  SyntheticCorpusSpec spec;
  spec.n_users = n_reviews / 10;
  spec.n_items = n_reviews / 25;
  spec.n_reviews = n_reviews;
  return generate_synthetic_corpus(spec);
}

TermVector random_vector(SeededRng& rng, std::size_t nnz, std::size_t dims) {
  std::vector<TermVector::Entry> entries;
  std::vector<bool> used(dims);
  while (entries.size() < nnz) {
    const auto t = static_cast<TermId>(rng.below(dims));
    if (used[t]) continue;
    used[t] = true;
    entries.push_back({t, 0.1 + rng.unit()});
  }
  return TermVector::from_entries(std::move(entries));
}

void BM_Cosine(benchmark::State& state) {
  SeededRng rng(1);
  const auto nnz = static_cast<std::size_t>(state.range(0));
  const TermVector a = random_vector(rng, nnz, nnz * 8), b = random_vector(rng, nnz, nnz * 8);
  for (auto _ : state) benchmark::DoNotOptimize(cosine(a, b));
}
BENCHMARK(BM_Cosine)->Arg(16)->Arg(256)->Arg(4096);

void BM_Normalize(benchmark::State& state) {
  const auto reviews = corpus(500);
  const NormConfig config = default_norm_config();
  std::size_t bytes = 0;
  for (auto _ : state) {
    for (const auto& r : reviews) {
      benchmark::DoNotOptimize(normalize(r.text, config));
      bytes += r.text.size();
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_Normalize);

void BM_PorterStem(benchmark::State& state) {
  static const char* const kWords[] = {"generalizations", "running", "caresses", "relational",
                                       "hopefully", "movies", "acting", "predictable"};
  for (auto _ : state) {
    for (const char* w : kWords) benchmark::DoNotOptimize(porter_stem(w));
  }
  state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_PorterStem);

void BM_Predict(benchmark::State& state, PredictorKind kind) {
  const auto reviews = corpus(5000);
  const ProfileIndex index = build_profiles(make_dataset(reviews, "bench"), default_norm_config());
  SeededRng rng(3);
  std::vector<std::pair<std::string, std::string>> queries;
  for (int k = 0; k < 64; ++k) {
    queries.emplace_back(reviews[rng.below(reviews.size())].user_id, reviews[rng.below(reviews.size())].item_id);
  }
  // warm the vector caches so the loop measures prediction, not vectorization
  for (const auto& [u, i] : queries) predict(kind, u, i, index);
  std::size_t q = 0;
  for (auto _ : state) {
    const auto& [u, i] = queries[q++ % queries.size()];
    benchmark::DoNotOptimize(predict(kind, u, i, index));
  }
}
BENCHMARK_CAPTURE(BM_Predict, CM, PredictorKind::cm);
BENCHMARK_CAPTURE(BM_Predict, MCM, PredictorKind::mcm);
BENCHMARK_CAPTURE(BM_Predict, CF_MCM, PredictorKind::cf_mcm);

}  // namespace

BENCHMARK_MAIN();
