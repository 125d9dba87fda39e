#include "revpred/textnorm.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include "revpred/errors.hpp"
#include "revpred/random.hpp"
#include "utf8.hpp"

namespace revpred {
namespace {

struct Token {
  std::string before_digits;  // form after steps 1-2, used for slang lookup
  std::string text;
};

std::string fold_and_strip(std::string_view in, const NormSteps& steps) {
  std::string out;
  out.reserve(in.size());
  std::size_t pos = 0;
  while (pos < in.size()) {
    char32_t cp = utf8::next(in, pos);
    if (steps.lowercase) cp = utf8::fold_case(cp);
    if (utf8::is_space(cp) || (steps.punctuation && utf8::is_punctuation(cp))) {
      out.push_back(' ');
    } else {
      utf8::append(out, cp);
    }
  }
  return out;
}

std::vector<Token> split_tokens(std::string_view s, const NormSteps& steps) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i == start) continue;
    Token t;
    t.before_digits = std::string(s.substr(start, i - start));
    if (steps.numbers) {
      std::copy_if(t.before_digits.begin(), t.before_digits.end(), std::back_inserter(t.text),
                   [](char c) { return c < '0' || c > '9'; });
    } else {
      t.text = t.before_digits;
    }
    tokens.push_back(std::move(t));
  }
  return tokens;
}

class Normalizer {
 public:
  explicit Normalizer(const NormConfig& config) : config_(config) {}

  TokenList run(std::string_view text) const {
    TokenList out;
    // Steps 1-3, then tokenization.
    for (Token& t : split_tokens(fold_and_strip(utf8::sanitize(text), config_.steps), config_.steps)) {
      const std::string* phrase = slang_for(t);
      if (t.text.empty() && phrase == nullptr) continue;
      if (is_stopword(t.text) && !t.text.empty()) continue;  // step 4
      if (phrase != nullptr) {                                // step 5
        for (Token& sub : split_tokens(fold_and_strip(*phrase, config_.steps), config_.steps)) {
          emit(std::move(sub.text), out);
        }
        continue;
      }
      emit(std::move(t.text), out);
    }
    return out;
  }

 private:
  bool is_stopword(const std::string& token) const {
    return config_.steps.stopwords && config_.stopwords.contains(token);
  }

  const std::string* slang_for(const Token& t) const {
    if (!config_.steps.slang || config_.slang.empty()) return nullptr;
    auto it = config_.slang.find(t.before_digits);
    if (it == config_.slang.end() && !t.text.empty()) it = config_.slang.find(t.text);
    return it == config_.slang.end() ? nullptr : &it->second;
  }

  // Step 6 plus the final stopword check, for a token that survived step 4.
  void emit(std::string token, TokenList& out) const {
    if (token.empty() || is_stopword(token)) return;
    if (config_.steps.stemming) {
      token = porter_stem(token);
      if (is_stopword(token)) return;
    }
    out.push_back(std::move(token));
  }

  const NormConfig& config_;
};

std::ifstream open_list(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + std::string(what) + " file '" + path.string() + "'");
  return in;
}

std::string lowercase(std::string_view s) {
  std::string out;
  std::size_t pos = 0;
  while (pos < s.size()) utf8::append(out, utf8::fold_case(utf8::next(s, pos)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && utf8::is_ascii_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && utf8::is_ascii_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

TokenList normalize(std::string_view text, const NormConfig& config) {
  return Normalizer(config).run(text);
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  auto in = open_list(path, "stopword");
  std::unordered_set<std::string> words;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view entry = line;
    if (auto hash = entry.find('#'); hash != std::string_view::npos) entry = entry.substr(0, hash);
    entry = trim(entry);
    if (entry.empty()) continue;
    if (std::any_of(entry.begin(), entry.end(), utf8::is_ascii_space)) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": stopword entry contains whitespace");
    }
    words.insert(lowercase(utf8::sanitize(entry)));
  }
  return words;
}

std::unordered_map<std::string, std::string> load_slang(const std::filesystem::path& path) {
  auto in = open_list(path, "slang");
  std::unordered_map<std::string, std::string> slang;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected token<TAB>replacement");
    }
    const std::string key = lowercase(utf8::sanitize(trim(std::string_view(line).substr(0, tab))));
    const std::string phrase =
        lowercase(utf8::sanitize(trim(std::string_view(line).substr(tab + 1))));
    if (key.empty() || std::any_of(key.begin(), key.end(), utf8::is_ascii_space)) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad slang token");
    }
    if (!slang.emplace(key, phrase).second) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": duplicate slang key '" + key + "'");
    }
  }
  return slang;
}

NormConfig load_wordlists(const std::filesystem::path& stopword_path,
                          const std::filesystem::path& slang_path) {
  NormConfig config;
  config.stopwords = load_stopwords(stopword_path);
  config.slang = load_slang(slang_path);
  return config;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("REVPRED_DATA_DIR"); env && *env) return env;
  const std::filesystem::path source = REVPRED_SOURCE_DATA_DIR;
  if (std::filesystem::exists(source / "stopwords.txt")) return source;
  return REVPRED_INSTALL_DATA_DIR;
}

NormConfig default_norm_config() {
  const auto dir = default_data_dir();
  return load_wordlists(dir / "stopwords.txt", dir / "slang.tsv");
}

std::uint64_t fingerprint(const NormConfig& config) {
  std::uint64_t h = fnv1a64("revpred-norm");
  const NormSteps& s = config.steps;
  for (bool flag : {s.lowercase, s.punctuation, s.numbers, s.stopwords, s.slang, s.stemming}) {
    h = hash_combine(h, flag ? 1 : 0);
  }
  const std::set<std::string> stop(config.stopwords.begin(), config.stopwords.end());
  for (const auto& w : stop) h = hash_combine(h, fnv1a64(w));
  h = hash_combine(h, 0x5a5a);
  const std::map<std::string, std::string> slang(config.slang.begin(), config.slang.end());
  for (const auto& [k, v] : slang) h = hash_combine(hash_combine(h, fnv1a64(k)), fnv1a64(v));
  return h;
}

}  // namespace revpred
