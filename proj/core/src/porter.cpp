#include <algorithm>
#include <string>
#include <string_view>

#include "revpred/textnorm.hpp"

namespace revpred {
namespace {

// The word lives in buf_[0..k_]; j_ marks the end of the stem left after the
// last successful ends() match.
class PorterStemmer {
 public:
  explicit PorterStemmer(std::string_view word) : buf_(word), k_(static_cast<int>(word.size()) - 1) {}

  std::string run() {
    if (k_ <= 1) return buf_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return buf_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  char at(int i) const { return buf_[static_cast<std::size_t>(i)]; }

  bool consonant(int i) const {
    switch (at(i)) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 || !consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in buf_[0..j_].
  int measure() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!consonant(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (consonant(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!consonant(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(int i) const {
    return i >= 1 && at(i) == at(i - 1) && consonant(i);
  }

  // consonant-vowel-consonant ending at i, where the last one is not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !consonant(i) || consonant(i - 1) || !consonant(i - 2)) return false;
    const char c = at(i);
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(buf_).substr(static_cast<std::size_t>(k_ + 1 - len), s.size()) != s) {
      return false;
    }
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    buf_.replace(static_cast<std::size_t>(j_ + 1), std::string::npos, s);
    k_ = j_ + static_cast<int>(s.size());
  }

  void replace_if_measured(std::string_view s) {
    if (measure() > 0) set_to(s);
  }

  // Tries each (suffix, replacement) pair in order; the first suffix that
  // matches decides, whether or not its replacement fires.
  template <std::size_t N>
  void apply_rules(const std::pair<std::string_view, std::string_view> (&rules)[N]) {
    for (const auto& [suffix, repl] : rules) {
      if (ends(suffix)) {
        replace_if_measured(repl);
        return;
      }
    }
  }

  // Plurals and -ed / -ing.
  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses")) {
        k_ -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (at(k_ - 1) != 's') {
        --k_;
      }
    }
    if (ends("eed")) {
      if (measure() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_consonant(k_)) {
        --k_;
        const char c = at(k_);
        if (c == 'l' || c == 's' || c == 'z') ++k_;
      } else if (j_ = k_; measure() == 1 && cvc(k_)) {
        set_to("e");
      }
    }
  }

  // Terminal y -> i when the stem holds another vowel.
  void step1c() {
    if (ends("y") && vowel_in_stem()) buf_[static_cast<std::size_t>(k_)] = 'i';
  }

  // Double suffixes to single ones, e.g. -ization -> -ize.
  void step2() {
    using R = std::pair<std::string_view, std::string_view>;
    switch (at(k_ - 1)) {
      case 'a': {
        static constexpr R rules[] = {{"ational", "ate"}, {"tional", "tion"}};
        apply_rules(rules);
        break;
      }
      case 'c': {
        static constexpr R rules[] = {{"enci", "ence"}, {"anci", "ance"}};
        apply_rules(rules);
        break;
      }
      case 'e': {
        static constexpr R rules[] = {{"izer", "ize"}};
        apply_rules(rules);
        break;
      }
      case 'l': {
        static constexpr R rules[] = {
            {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
        apply_rules(rules);
        break;
      }
      case 'o': {
        static constexpr R rules[] = {{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
        apply_rules(rules);
        break;
      }
      case 's': {
        static constexpr R rules[] = {
            {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
        apply_rules(rules);
        break;
      }
      case 't': {
        static constexpr R rules[] = {{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
        apply_rules(rules);
        break;
      }
      case 'g': {
        static constexpr R rules[] = {{"logi", "log"}};
        apply_rules(rules);
        break;
      }
      default:
        break;
    }
  }

  // -ic-, -full, -ness etc.
  void step3() {
    using R = std::pair<std::string_view, std::string_view>;
    switch (at(k_)) {
      case 'e': {
        static constexpr R rules[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
        apply_rules(rules);
        break;
      }
      case 'i': {
        static constexpr R rules[] = {{"iciti", "ic"}};
        apply_rules(rules);
        break;
      }
      case 'l': {
        static constexpr R rules[] = {{"ical", "ic"}, {"ful", ""}};
        apply_rules(rules);
        break;
      }
      case 's': {
        static constexpr R rules[] = {{"ness", ""}};
        apply_rules(rules);
        break;
      }
      default:
        break;
    }
  }

  bool step4_suffix() {
    switch (at(k_ - 1)) {
      case 'a': return ends("al");
      case 'c': return ends("ance") || ends("ence");
      case 'e': return ends("er");
      case 'i': return ends("ic");
      case 'l': return ends("able") || ends("ible");
      case 'n': return ends("ant") || ends("ement") || ends("ment") || ends("ent");
      case 'o':
        if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) return true;
        return ends("ou");
      case 's': return ends("ism");
      case 't': return ends("ate") || ends("iti");
      case 'u': return ends("ous");
      case 'v': return ends("ive");
      case 'z': return ends("ize");
      default: return false;
    }
  }

  // Strips -ant, -ence etc. in context <c>vcvc<v>.
  void step4() {
    if (step4_suffix() && measure() > 1) k_ = j_;
  }

  // Final -e and -ll.
  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      const int m = measure();
      if (m > 1 || (m == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && double_consonant(k_) && measure() > 1) --k_;
  }

  std::string buf_;
  int k_;
  int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  const bool ascii_lower =
      std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; });
  if (!ascii_lower || word.size() <= 2) return std::string(word);
  return PorterStemmer(word).run();
}

}  // namespace revpred
