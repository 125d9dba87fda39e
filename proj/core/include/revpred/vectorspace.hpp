#pragma once

// Sparse term vectors, IDF weighting and cosine similarity.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace revpred {

using TermId = std::uint32_t;

/// Interns term strings to dense ids in first-seen order.
class Vocabulary {
 public:
  TermId intern(std::string_view term);
  std::optional<TermId> find(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_.at(id); }
  std::size_t size() const { return terms_.size(); }

  std::vector<TermId> intern_all(std::span<const std::string> tokens);

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId, Hash, std::equal_to<>> ids_;
};

enum class Weighting { tf, tfidf };

/// Smoothed inverse document frequency:
///   idf(t) = ln((1 + N) / (1 + df(t))) + 1
/// Terms never seen during fitting get ln(1 + N) + 1.
class IdfTable {
 public:
  IdfTable() = default;

  double weight(TermId term) const;
  double unseen_weight() const { return unseen_; }
  std::size_t n_docs() const { return n_docs_; }
  std::size_t document_frequency(TermId term) const {
    return term < df_.size() ? df_[term] : 0;
  }

  /// Rebuilds a table from stored document frequencies (snapshots).
  static IdfTable from_document_frequencies(std::vector<std::uint32_t> df, std::size_t n_docs);
  const std::vector<std::uint32_t>& document_frequencies() const { return df_; }

 private:
  friend IdfTable build_idf(std::span<const std::vector<TermId>> documents);

  std::vector<std::uint32_t> df_;
  std::vector<double> idf_;
  std::size_t n_docs_ = 0;
  double unseen_ = 1.0;
};

/// Fits document frequencies; each document counts a term at most once.
/// Throws std::invalid_argument on an empty document list.
IdfTable build_idf(std::span<const std::vector<TermId>> documents);

/// Sparse non-negative vector sorted by term id, with its L2 norm cached.
class TermVector {
 public:
  struct Entry {
    TermId term;
    double weight;

    bool operator==(const Entry&) const = default;
  };

  TermVector() = default;

  /// Term counts (idf == nullptr) or counts scaled by idf.
  static TermVector from_tokens(std::span<const TermId> tokens, const IdfTable* idf = nullptr);

  /// Entries in any order. Zero weights are dropped. Throws
  /// std::invalid_argument on a negative or non-finite weight or a repeated
  /// term.
  static TermVector from_entries(std::vector<Entry> entries);

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double norm() const { return norm_; }
  double weight(TermId term) const;
  double total_weight() const;

 private:
  explicit TermVector(std::vector<Entry> sorted_entries);

  std::vector<Entry> entries_;
  double norm_ = 0.0;
};

double dot(const TermVector& a, const TermVector& b);

/// dot(a, b) / (|a| |b|), clamped to [0, 1]; 0 when either side is empty.
double cosine(const TermVector& a, const TermVector& b);

}  // namespace revpred
