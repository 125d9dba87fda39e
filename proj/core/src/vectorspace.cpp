#include "revpred/vectorspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace revpred {

TermId Vocabulary::intern(std::string_view term) {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  const auto id = static_cast<TermId>(terms_.size());
  terms_.emplace_back(term);
  ids_.emplace(terms_.back(), id);
  return id;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::vector<TermId> Vocabulary::intern_all(std::span<const std::string> tokens) {
  std::vector<TermId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(intern(t));
  return ids;
}

double IdfTable::weight(TermId term) const {
  if (term < idf_.size() && df_[term] > 0) return idf_[term];
  return unseen_;
}

IdfTable IdfTable::from_document_frequencies(std::vector<std::uint32_t> df, std::size_t n_docs) {
  IdfTable t;
  t.n_docs_ = n_docs;
  const double n1 = 1.0 + static_cast<double>(n_docs);
  t.unseen_ = std::log(n1) + 1.0;
  t.idf_.resize(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) {
    t.idf_[i] = std::log(n1 / (1.0 + static_cast<double>(df[i]))) + 1.0;
  }
  t.df_ = std::move(df);
  return t;
}

IdfTable build_idf(std::span<const std::vector<TermId>> documents) {
  if (documents.empty()) throw std::invalid_argument("build_idf: no documents");
  std::vector<std::uint32_t> df;
  std::vector<std::size_t> last_doc;  // last document index that counted the term
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (TermId t : documents[d]) {
      if (t >= df.size()) {
        df.resize(t + 1, 0);
        last_doc.resize(t + 1, SIZE_MAX);
      }
      if (last_doc[t] != d) {
        last_doc[t] = d;
        ++df[t];
      }
    }
  }
  return IdfTable::from_document_frequencies(std::move(df), documents.size());
}

TermVector::TermVector(std::vector<Entry> sorted_entries) : entries_(std::move(sorted_entries)) {
  double sq = 0.0;
  for (const auto& e : entries_) sq += e.weight * e.weight;
  norm_ = std::sqrt(sq);
}

TermVector TermVector::from_tokens(std::span<const TermId> tokens, const IdfTable* idf) {
  std::vector<TermId> sorted(tokens.begin(), tokens.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double count = static_cast<double>(j - i);
    entries.push_back({sorted[i], idf ? count * idf->weight(sorted[i]) : count});
    i = j;
  }
  return TermVector(std::move(entries));
}

TermVector TermVector::from_entries(std::vector<Entry> entries) {
  for (const auto& e : entries) {
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw std::invalid_argument("TermVector: weights must be finite and non-negative");
    }
  }
  std::erase_if(entries, [](const Entry& e) { return e.weight == 0.0; });
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.term < b.term; });
  if (std::adjacent_find(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.term == b.term;
      }) != entries.end()) {
    throw std::invalid_argument("TermVector: repeated term");
  }
  return TermVector(std::move(entries));
}

double TermVector::weight(TermId term) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                             [](const Entry& e, TermId t) { return e.term < t; });
  return it != entries_.end() && it->term == term ? it->weight : 0.0;
}

double TermVector::total_weight() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.weight;
  return s;
}

double dot(const TermVector& a, const TermVector& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  const auto xs = small.entries();
  const auto ys = large.entries();
  double sum = 0.0;
  if (xs.empty()) return sum;
  // Lopsided sizes: binary-search each entry of the small vector.
  if (ys.size() > 8 * xs.size()) {
    auto lo = ys.begin();
    for (const auto& x : xs) {
      lo = std::lower_bound(lo, ys.end(), x.term,
                            [](const TermVector::Entry& e, TermId t) { return e.term < t; });
      if (lo == ys.end()) break;
      if (lo->term == x.term) sum += x.weight * lo->weight;
    }
    return sum;
  }
  std::size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    if (xs[i].term < ys[j].term) {
      ++i;
    } else if (ys[j].term < xs[i].term) {
      ++j;
    } else {
      sum += xs[i].weight * ys[j].weight;
      ++i;
      ++j;
    }
  }
  return sum;
}

double cosine(const TermVector& a, const TermVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  const double c = dot(a, b) / (a.norm() * b.norm());
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace revpred
