#include <doctest.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "revpred/errors.hpp"
#include "revpred/random.hpp"
#include "revpred/textnorm.hpp"

using namespace revpred;
using revpred::testing::TempDir;

#ifndef REVPRED_TEST_DATA_DIR
#error "REVPRED_TEST_DATA_DIR must point at tests/data"
#endif

namespace {

const NormConfig& standard() {
  static const NormConfig config = default_norm_config();
  return config;
}

NormConfig only(NormSteps steps, const NormConfig& base = standard()) {
  NormConfig c = base;
  c.steps = steps;
  return c;
}

std::string join(const TokenList& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

// Text with letters of both cases, digits, ASCII and Unicode punctuation,
// slang, stopwords and some non-ASCII letters.
std::string random_text(SeededRng& rng) {
  static const char* const kPieces[] = {
      "I",      "LOVED", "this",  "Movie",   "!!!",  "10/10", "gr8",  "lol",   "the",     "don't",
      "b4",     "u",     "u2",    "acting",  "...",  "(",     ")",    "\"",    "--",      "#1",
      "caf\xC3\xA9", "\xC3\x89" "COLE", "na\xC3\xAFve", "\xE2\x80\x9Cquoted\xE2\x80\x9D",
      "x\xE2\x80\x94y", "\xCE\xA3\xCE\xBF\xCF\x86\xCE\xAF\xCE\xB1", "\xE2\x82\xAC" "5",
      "relational", "happily", "running",  "A+", "$$$", "4ever", "w00t", "cats'", "e-mail",
      "\t", "\n", "  ", "\xC2\xA0", "ok?", "\xC2\xBF" "qu\xC3\xA9?", "fun!", "USING", "tHe"};
  std::string out;
  const std::size_t n = rng.below(25);
  for (std::size_t k = 0; k < n; ++k) {
    out += kPieces[rng.below(std::size(kPieces))];
    if (rng.below(4) != 0) out += ' ';
  }
  return out;
}

}  // namespace

TEST_SUITE("textnorm") {
  TEST_CASE("full pipeline on a typical review fragment") {
    CHECK(normalize("I LOVED this Movie!!! 10/10", standard()) == TokenList{"love", "movi"});
  }

  TEST_CASE("empty text") {
    CHECK(normalize("", standard()).empty());
    CHECK(normalize("  \n\t ", standard()).empty());
    CHECK(normalize("!!! 42 ...", standard()).empty());
  }

  TEST_CASE("slang is expanded and then stemmed") {
    NormConfig c;
    c.slang = {{"lol", "laughing"}, {"gr8", "great"}};
    CHECK(normalize("lol gr8", c) == TokenList{"laugh", "great"});
  }

  TEST_CASE("slang phrases go through the stopword filter and the stemmer") {
    NormConfig c;
    c.stopwords = {"out", "before"};
    c.slang = {{"lol", "laughing out loud"}, {"b4", "before"}, {"omg", "OH, my god!"}};
    CHECK(normalize("lol b4", c) == TokenList{"laugh", "loud"});
    CHECK(normalize("omg", c) == TokenList{"oh", "my", "god"});
    // a replacement is not expanded again
    c.slang["laugh"] = "lol";
    CHECK(normalize("laugh", c) == TokenList{"lol"});
  }

  TEST_CASE("a stem that lands on a stopword is dropped") {
    NormConfig c;
    c.stopwords = {"us"};
    CHECK(normalize("using us users", c) == TokenList{"user"});
  }

  TEST_CASE("digits are deleted wherever they occur") {
    const NormConfig c = only({true, true, true, false, false, false});
    CHECK(normalize("4ever w00t 10/10 2nd", c) == TokenList{"ever", "wt", "nd"});
  }

  TEST_CASE("disabled steps are skipped") {
    CHECK(normalize("I LOVED this Movie!!! 10/10", only(NormSteps::none())) ==
          TokenList{"I", "LOVED", "this", "Movie!!!", "10/10"});
    CHECK(normalize("I LOVED this Movie!!!", only({true, false, false, false, false, false})) ==
          TokenList{"i", "loved", "this", "movie!!!"});
    CHECK(normalize("I LOVED this Movie!!!", only({true, true, false, true, false, false})) ==
          TokenList{"loved", "movie"});
    NormSteps no_lower;
    no_lower.lowercase = false;
    CHECK(normalize("Running dogs", only(no_lower)) == TokenList{"Running", "dog"});
  }

  TEST_CASE("Unicode letters are case folded and left unstemmed") {
    CHECK(normalize("\xC3\x89" "COLES caf\xC3\xA9s", only({true, true, true, false, false, true})) ==
          TokenList{"\xC3\xA9" "coles", "caf\xC3\xA9s"});
    CHECK(normalize("\xCE\xA3\xCE\x9F\xCE\xA6\xCE\x99\xCE\x91", standard()) ==
          TokenList{"\xCF\x83\xCE\xBF\xCF\x86\xCE\xB9\xCE\xB1"});
    // typographic punctuation separates words like ASCII punctuation does
    CHECK(normalize("plot\xE2\x80\x94twist \xE2\x80\x9Cscore\xE2\x80\x9D", standard()) ==
          TokenList{"plot", "twist", "score"});
  }

  TEST_CASE("postconditions on random text") {
    SeededRng rng(17);
    for (int trial = 0; trial < 3000; ++trial) {
      const std::string text = random_text(rng);
      const TokenList tokens = normalize(text, standard());
      CHECK(tokens == normalize(text, standard()));
      for (const auto& t : tokens) {
        REQUIRE_FALSE(t.empty());
        CHECK(standard().stopwords.count(t) == 0);
        for (unsigned char ch : t) {
          CHECK_FALSE(std::isdigit(ch));
          CHECK_FALSE(std::ispunct(ch));
          CHECK_FALSE(std::isspace(ch));
          CHECK_FALSE(std::isupper(ch));
        }
      }
    }
  }

  TEST_CASE("ASCII input yields lowercase letters only") {
    SeededRng rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
      std::string text;
      const std::size_t n = rng.below(60);
      for (std::size_t k = 0; k < n; ++k) text.push_back(static_cast<char>(32 + rng.below(95)));
      for (const auto& t : normalize(text, standard())) {
        for (char ch : t) CHECK((ch >= 'a' && ch <= 'z'));
      }
    }
  }

  TEST_CASE("steps 1-4 are idempotent") {
    const NormConfig first_four = only({true, true, true, true, false, false});
    SeededRng rng(99);
    for (int trial = 0; trial < 2000; ++trial) {
      const TokenList once = normalize(random_text(rng), first_four);
      CHECK(normalize(join(once), first_four) == once);
    }
  }

  TEST_CASE("porter examples") {
    CHECK(porter_stem("caresses") == "caress");
    CHECK(porter_stem("sky") == "sky");
    CHECK(porter_stem("relational") == "relat");
    CHECK(porter_stem("ponies") == "poni");
    CHECK(porter_stem("hopping") == "hop");
    CHECK(porter_stem("filing") == "file");
    CHECK(porter_stem("generalizations") == "gener");
    CHECK(porter_stem("sensibility") == "sensibl");
    CHECK(porter_stem("a") == "a");
    CHECK(porter_stem("is") == "is");
    // non a-z input is returned unchanged
    CHECK(porter_stem("caf\xC3\xA9s") == "caf\xC3\xA9s");
    CHECK(porter_stem("Running") == "Running");
  }

  TEST_CASE("porter agrees with an independent implementation") {
    std::ifstream in(std::string(REVPRED_TEST_DATA_DIR) + "/porter_reference_stems.tsv");
    REQUIRE(in);
    std::size_t n = 0, disagreements = 0;
    for (std::string line; std::getline(in, line);) {
      const auto tab = line.find('\t');
      const std::string word = line.substr(0, tab), stem = line.substr(tab + 1);
      ++n;
      const std::string got = porter_stem(word);
      // The reference file comes from SQLite's stemmer, which leaves the bare
      // suffix "ies" as "ie"; the original algorithm maps it to "i".
      if (word == "ies") {
        CHECK(got == "i");
        continue;
      }
      if (got != stem) {
        ++disagreements;
        INFO(word, " -> ", got, ", expected ", stem);
        CHECK(got == stem);
      }
      CHECK(got.size() <= word.size());
      if (word.size() >= 2) CHECK_FALSE(got.empty());
    }
    CHECK(n > 20000);
    CHECK(disagreements == 0);
  }

  TEST_CASE("word list loading") {
    TempDir dir("wordlists");
    CHECK(load_stopwords(dir.write("s.txt", "a\nthe\n# comment\nof")) ==
          std::unordered_set<std::string>{"a", "the", "of"});
    CHECK(load_stopwords(dir.write("s2.txt", "The  # trailing comment\r\nOF\n\n")) ==
          std::unordered_set<std::string>{"the", "of"});
    CHECK(load_slang(dir.write("g.txt", "gr8\tgreat")) ==
          std::unordered_map<std::string, std::string>{{"gr8", "great"}});
    CHECK(load_slang(dir.write("g2.txt", "# c\nLOL\tLaughing Out Loud\n")) ==
          std::unordered_map<std::string, std::string>{{"lol", "laughing out loud"}});
  }

  TEST_CASE("word list errors") {
    TempDir dir("wordlists");
    try {
      load_slang(dir.write("dup.txt", "lol\thaha\nlol\tlaughing\n"));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("'lol'") != std::string::npos);
    }
    try {
      load_stopwords(dir / "missing.txt");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("missing.txt") != std::string::npos);
    }
    CHECK_THROWS_AS(load_slang(dir.write("notab.txt", "lol laughing\n")), ConfigError);
    CHECK_THROWS_AS(load_stopwords(dir.write("space.txt", "two words\n")), ConfigError);
    CHECK_THROWS_AS(load_wordlists(dir / "nope.txt", dir / "nope2.txt"), ConfigError);
  }

  TEST_CASE("shipped word lists load and are well formed") {
    const NormConfig& c = standard();
    CHECK(c.stopwords.size() > 300);
    CHECK(c.slang.size() > 30);
    for (const auto& w : c.stopwords) {
      for (unsigned char ch : w) {
        CHECK_FALSE(std::isspace(ch));
        CHECK_FALSE(std::isupper(ch));
      }
    }
    CHECK(c.slang.at("gr8") == "great");
  }

  TEST_CASE("config fingerprint") {
    NormConfig a = standard();
    NormConfig b = standard();
    CHECK(fingerprint(a) == fingerprint(b));
    b.steps.stemming = false;
    CHECK(fingerprint(a) != fingerprint(b));
    b = a;
    b.stopwords.insert("zzz");
    CHECK(fingerprint(a) != fingerprint(b));
    b = a;
    b.slang["zzz"] = "y";
    CHECK(fingerprint(a) != fingerprint(b));
  }
}
