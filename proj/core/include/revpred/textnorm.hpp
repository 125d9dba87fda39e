#pragma once

// Review text normalization: lowercase, strip punctuation, strip digits,
// drop stopwords, expand slang, Porter-stem.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace revpred {

using TokenList = std::vector<std::string>;

/// Which normalization steps run. Disabled steps are skipped; the others keep
/// their relative order.
struct NormSteps {
  bool lowercase = true;
  bool punctuation = true;
  bool numbers = true;
  bool stopwords = true;
  bool slang = true;
  bool stemming = true;

  /// Every step disabled: plain whitespace tokenization of the raw text.
  static constexpr NormSteps none() { return {false, false, false, false, false, false}; }

  bool operator==(const NormSteps&) const = default;
};

struct NormConfig {
  std::unordered_set<std::string> stopwords;
  std::unordered_map<std::string, std::string> slang;
  NormSteps steps;
};

/// Runs the enabled steps in order:
///   1. lowercase (simple Unicode case folding)
///   2. punctuation becomes whitespace
///   3. digits are deleted; tokens left empty vanish
///   4. whitespace tokenization, stopwords dropped
///   5. slang tokens replaced by their phrase; the phrase goes back through
///      steps 1-4 and 6 (it is not expanded again)
///   6. Porter stemming of pure a-z tokens; a stem that lands on a stopword
///      is dropped as well
/// Slang lookup also tries the token as it looked before step 3, so entries
/// such as "gr8" still match.
TokenList normalize(std::string_view text, const NormConfig& config);

/// Porter's stemming algorithm as distributed in his reference
/// implementation (including the "bli" -> "ble" and "logi" -> "log" rules).
/// Words of length <= 2 and words with characters outside a-z are returned
/// unchanged.
std::string porter_stem(std::string_view word);

/// One word per line, "#" starts a comment, lowercased on load. Throws
/// ConfigError for a missing file or an entry containing whitespace.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

/// "token<TAB>replacement phrase" per line, lowercased on load; blank lines
/// and lines starting with "#" are skipped. Throws ConfigError for a missing
/// file, a line without a tab, or a duplicate token.
std::unordered_map<std::string, std::string> load_slang(const std::filesystem::path& path);

/// Both word lists with every step enabled.
NormConfig load_wordlists(const std::filesystem::path& stopword_path,
                          const std::filesystem::path& slang_path);

/// Directory holding the shipped stopwords.txt and slang.tsv. Honors
/// $REVPRED_DATA_DIR, then the source tree, then the install prefix.
std::filesystem::path default_data_dir();

/// Shipped word lists, every step enabled.
NormConfig default_norm_config();

/// Stable hash of the word lists and step flags.
std::uint64_t fingerprint(const NormConfig& config);

}  // namespace revpred
