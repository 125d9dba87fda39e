#include "revpred/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string_view>

#include "revpred/random.hpp"

namespace revpred {
namespace {

using Phrases = std::vector<std::string_view>;

const std::array<Phrases, kNumStars> kSentiment = {{
    {"a complete waste of time", "terrible in every way", "the worst movie i have ever seen",
     "awful acting and awful writing", "i want my money back", "unwatchable garbage",
     "avoid this at all costs", "painfully bad", "turned it off after twenty minutes",
     "a total disaster", "insulting to the audience", "horrible editing and a stupid ending"},
    {"pretty disappointing", "the plot was weak and predictable", "i was bored most of the time",
     "not worth the hype", "poorly paced and flat", "expected much more from it",
     "a letdown overall", "the acting felt wooden", "hard to sit through",
     "only a couple of decent scenes", "sloppy writing ruined it", "dull and forgettable"},
    {"it was okay", "an average film at best", "mixed feelings about this one",
     "decent but forgettable", "some good moments and some dull ones", "watchable once",
     "nothing special really", "the middle part dragged", "fine for a rainy afternoon",
     "mediocre but harmless", "uneven but has its moments", "neither bad nor memorable"},
    {"really enjoyed it", "a solid and entertaining film", "worth watching more than once",
     "pretty fun overall", "well acted with a few slow moments", "i liked it a lot",
     "a satisfying watch", "charming and engaging", "recommend it with minor reservations",
     "strong performances overall", "clever and enjoyable", "held my attention throughout"},
    {"absolutely loved it", "a true masterpiece", "brilliant from start to finish",
     "one of my all time favorites", "simply stunning performances", "i was blown away",
     "highly recommend it to everyone", "perfect in every way", "an instant classic",
     "beautifully crafted and deeply moving", "breathtaking and unforgettable",
     "a flawless and magnificent film"},
}};

struct Inflection {
  std::string_view word;
  Phrases variants;
};

const std::vector<Inflection> kInflections = {
    {"loved", {"love", "loves", "loving", "lovely"}},
    {"enjoyed", {"enjoy", "enjoying", "enjoyable", "enjoyment"}},
    {"disappointing", {"disappointed", "disappointment", "disappoints"}},
    {"bored", {"boring", "boredom", "bores"}},
    {"recommend", {"recommended", "recommending", "recommendation"}},
    {"terrible", {"terribly"}},
    {"awful", {"awfully"}},
    {"performances", {"performance", "performed", "performing"}},
    {"watching", {"watched", "watch", "watches"}},
    {"acted", {"acting", "actors", "acts"}},
    {"stunning", {"stunned", "stuns"}},
    {"brilliant", {"brilliantly", "brilliance"}},
    {"engaging", {"engaged", "engages"}},
    {"flawless", {"flawlessly"}},
    {"predictable", {"predictably", "predicted"}},
    {"forgettable", {"forgotten", "forget"}},
    {"moving", {"moved", "moves"}},
    {"entertaining", {"entertained", "entertainment", "entertains"}},
    {"ruined", {"ruins", "ruining"}},
    {"favorites", {"favorite", "favourite"}},
};

const std::vector<Phrases> kGenres = {
    {"explosions", "chase", "fight", "stunts", "villain", "hero", "gunfights", "action", "car", "mission"},
    {"jokes", "comedy", "laughs", "funny", "gags", "silly", "humor", "sitcom", "comedian", "banter"},
    {"romance", "love", "couple", "wedding", "heartbreak", "kiss", "relationship", "chemistry", "romantic", "date"},
    {"horror", "scary", "ghost", "haunted", "blood", "monster", "creepy", "zombies", "screams", "killer"},
    {"documentary", "history", "footage", "interviews", "facts", "war", "archive", "narrator", "historical", "events"},
    {"animation", "cartoon", "kids", "children", "animated", "songs", "disney", "family", "characters", "colorful"},
    {"space", "aliens", "planet", "future", "robots", "science", "spaceship", "galaxy", "fiction", "technology"},
    {"western", "cowboys", "ranch", "outlaw", "sheriff", "frontier", "horses", "desert", "saloon", "gunslinger"},
    {"musical", "singing", "dance", "broadway", "choreography", "soundtrack", "concert", "singer", "orchestra", "numbers"},
    {"mystery", "detective", "murder", "clues", "suspect", "thriller", "twist", "investigation", "crime", "suspense"},
};

const Phrases kNounFrames = {"scenes", "story", "plot", "direction", "cinematography", "script",
                             "ending", "cast", "dialogue", "soundtrack", "pacing", "sets"};

const Phrases kFiller = {
    "i watched this with my family over the weekend",
    "we rented it from the local store",
    "the dvd arrived quickly and in good shape",
    "bought it as a gift for my brother",
    "i had heard about it from a friend",
    "my wife and i saw it on a friday night",
    "it was on sale so i picked it up",
    "i remember seeing this years ago",
    "we watched it twice in one week",
    "the picture quality on this edition is fine",
    "this was the first time i saw it",
    "it came with a few extras and a commentary track",
};

const Phrases kQuirkWords = {
    "honestly", "frankly", "basically", "literally", "seriously", "folks", "cinephile", "popcorn",
    "rewatch", "bingeworthy", "vibe", "verdict", "recap", "kudos", "nitpick", "spoiler",
    "tl", "dr", "mkay", "yikes", "ahem", "alrighty", "anyhoo", "bravo", "cheers", "dude",
    "gosh", "heck", "indeed", "nah", "nope", "oof", "phew", "sheesh", "sigh", "welp", "whoa",
    "yay", "yup", "zing", "bottomline", "overall", "takeaway", "imho", "btw", "mate", "buddy",
};

const std::vector<std::pair<std::string_view, std::string_view>> kSlang = {
    {"great", "gr8"}, {"love", "luv"}, {"loved", "luvd"}, {"before", "b4"}, {"you", "u"},
    {"your", "ur"}, {"people", "ppl"}, {"because", "cuz"}, {"today", "2day"}, {"please", "plz"},
    {"favorite", "fav"}, {"thanks", "thx"}, {"awesome", "awsome"}, {"probably", "prob"},
};

const Phrases kFirstNames = {"Ava", "Ben", "Cleo", "Dev", "Eli", "Fay", "Gus", "Hana", "Ivan",
                             "Jade", "Kai", "Lena", "Milo", "Nora", "Otto", "Pia", "Quinn",
                             "Rosa", "Sami", "Tess", "Uma", "Vik", "Wren", "Yara", "Zed"};
const Phrases kLastNames = {"Abbott", "Barros", "Cheng", "Dorsey", "Eklund", "Farrow", "Gallo",
                            "Hale", "Ingram", "Jovic", "Kerr", "Lindqvist", "Moreau", "Nakata",
                            "Okafor", "Pryce", "Quint", "Rourke", "Sato", "Tolliver", "Ueda",
                            "Varga", "Whitlock", "Xu", "Yilmaz", "Zamora"};

constexpr std::string_view kAlnum = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

struct ItemModel {
  std::string id;
  std::size_t genre;
  double quality;
  std::vector<std::string> cast;
};

struct UserModel {
  std::string id;
  std::string name;
  double bias;
  std::vector<double> affinity;  // per genre
  std::vector<std::string> catchphrases;
  double slang_rate;
  double shout_rate;
  double bang_rate;
  double number_rate;
  std::size_t verbosity;
};

class Generator {
 public:
  explicit Generator(const SyntheticCorpusSpec& spec) : spec_(spec), rng_(spec.seed) {}

  std::vector<Review> run() {
    make_items();
    make_users();
    auto pairs = draw_pairs();
    const std::vector<int> stars = assign_stars(pairs);
    std::vector<Review> out;
    out.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const UserModel& u = users_[pairs[k].first];
      const ItemModel& i = items_[pairs[k].second];
      Review r;
      r.user_id = u.id;
      r.item_id = i.id;
      r.profile_name = u.name;
      r.rating = stars[k];
      r.helpfulness.total = static_cast<std::int64_t>(rng_.below(12));
      r.helpfulness.found = static_cast<std::int64_t>(rng_.below(r.helpfulness.total + 1));
      r.timestamp = 946684800 + static_cast<std::int64_t>(rng_.below(12LL * 365 * 86400));
      r.summary = summary(r.rating);
      r.text = review_text(u, i, r.rating);
      out.push_back(std::move(r));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Review& a, const Review& b) { return a.timestamp < b.timestamp; });
    return out;
  }

 private:
  double gaussian() {
    const double u1 = std::max(rng_.unit(), 1e-300);
    const double u2 = rng_.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  bool chance(double p) { return rng_.unit() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(rng_.below(xs.size()))];
  }

  std::string random_id(char first, std::size_t len) {
    std::string id(1, first);
    for (std::size_t k = 1; k < len; ++k) id.push_back(kAlnum[rng_.below(kAlnum.size())]);
    return id;
  }

  void make_items() {
    std::set<std::string> seen;
    for (std::size_t k = 0; k < spec_.n_items; ++k) {
      ItemModel item;
      do {
        item.id = "B00" + random_id('0', 7).substr(0, 7);
      } while (!seen.insert(item.id).second);
      item.genre = static_cast<std::size_t>(rng_.below(kGenres.size()));
      item.quality = 0.8 * gaussian();
      const std::size_t n_cast = 2 + static_cast<std::size_t>(rng_.below(3));
      for (std::size_t c = 0; c < n_cast; ++c) {
        item.cast.push_back(std::string(pick(kFirstNames)) + " " + std::string(pick(kLastNames)));
      }
      items_.push_back(std::move(item));
    }
  }

  void make_users() {
    std::set<std::string> seen;
    for (std::size_t k = 0; k < spec_.n_users; ++k) {
      UserModel u;
      do {
        u.id = random_id('A', 14);
      } while (!seen.insert(u.id).second);
      u.name = std::string(pick(kFirstNames)) + " " + std::string(pick(kLastNames)).substr(0, 1) + ".";
      u.bias = 0.6 * gaussian();
      for (std::size_t g = 0; g < kGenres.size(); ++g) u.affinity.push_back(0.5 * gaussian());
      const std::size_t n_phrases = 1 + static_cast<std::size_t>(rng_.below(3));
      for (std::size_t p = 0; p < n_phrases; ++p) {
        std::string phrase;
        const std::size_t len = 2 + static_cast<std::size_t>(rng_.below(3));
        for (std::size_t w = 0; w < len; ++w) {
          if (w) phrase += ' ';
          phrase += pick(kQuirkWords);
        }
        u.catchphrases.push_back(std::move(phrase));
      }
      u.slang_rate = chance(0.25) ? 0.3 + 0.5 * rng_.unit() : 0.0;
      u.shout_rate = chance(0.3) ? 0.4 * rng_.unit() : 0.0;
      u.bang_rate = rng_.unit();
      u.number_rate = chance(0.3) ? 0.5 * rng_.unit() : 0.0;
      u.verbosity = 3 + static_cast<std::size_t>(rng_.below(6));
      users_.push_back(std::move(u));
    }
  }

  static std::vector<double> cumulative_zipf(std::size_t n, double s, double offset) {
    std::vector<double> cum(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      total += 1.0 / std::pow(static_cast<double>(k) + offset, s);
      cum[k] = total;
    }
    for (double& c : cum) c /= total;
    return cum;
  }

  std::size_t draw(const std::vector<double>& cum) {
    const double x = rng_.unit();
    const auto it = std::upper_bound(cum.begin(), cum.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
  }

  std::vector<std::pair<std::size_t, std::size_t>> draw_pairs() {
    if (spec_.n_reviews * 2 > spec_.n_users * spec_.n_items) {
      throw std::invalid_argument("synthetic corpus too dense for the requested user/item counts");
    }
    const auto user_cum = cumulative_zipf(spec_.n_users, 0.7, 10.0);
    const auto item_cum = cumulative_zipf(spec_.n_items, 0.8, 5.0);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(spec_.n_reviews);
    while (pairs.size() < spec_.n_reviews) {
      const std::size_t u = draw(user_cum);
      // Users lean towards genres they like.
      std::size_t i = draw(item_cum);
      for (int attempt = 0; attempt < 2; ++attempt) {
        const std::size_t j = draw(item_cum);
        if (users_[u].affinity[items_[j].genre] > users_[u].affinity[items_[i].genre]) i = j;
      }
      if (seen.emplace(u, i).second) pairs.emplace_back(u, i);
    }
    return pairs;
  }

  // Stars are latent-score quantiles matching the configured mix.
  std::vector<int> assign_stars(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<double> latent(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const UserModel& u = users_[pairs[k].first];
      const ItemModel& i = items_[pairs[k].second];
      latent[k] = u.bias + i.quality + u.affinity[i.genre] + 0.6 * gaussian();
    }
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return latent[a] < latent[b]; });
    const StarCounts counts = allocate_star_counts(pairs.size(), spec_.star_mix);
    std::vector<int> stars(pairs.size());
    std::size_t pos = 0;
    for (int r : kStars) {
      for (std::size_t c = 0; c < counts[star_index(r)]; ++c) stars[order[pos++]] = r;
    }
    return stars;
  }

  std::string summary(int star) {
    std::string s(pick(kSentiment[star_index(star)]));
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
  }

  std::string sentiment_phrase(int star) {
    int used = star;
    const double x = rng_.unit();
    if (x < 0.25) {
      used = std::clamp(star + (chance(0.5) ? 1 : -1), kMinStar, kMaxStar);
    } else if (x < 0.30) {
      used = kMinStar + static_cast<int>(rng_.below(kNumStars));
    }
    std::string out;
    std::string_view phrase = pick(kSentiment[star_index(used)]);
    std::size_t start = 0;
    while (start <= phrase.size()) {
      std::size_t end = phrase.find(' ', start);
      if (end == std::string_view::npos) end = phrase.size();
      std::string_view word = phrase.substr(start, end - start);
      std::string w(word);
      for (const auto& inf : kInflections) {
        if (inf.word == word && chance(0.4)) w = std::string(pick(inf.variants));
      }
      if (!out.empty()) out += ' ';
      out += w;
      start = end + 1;
    }
    return out;
  }

  std::string topic_phrase(const ItemModel& item) {
    const Phrases& genre = kGenres[item.genre];
    std::string out = "the ";
    out += pick(genre);
    out += ' ';
    out += pick(kNounFrames);
    if (chance(0.6)) {
      out += " with ";
      out += pick(item.cast);
    }
    const std::size_t extra = static_cast<std::size_t>(rng_.below(3));
    for (std::size_t k = 0; k < extra; ++k) {
      out += chance(0.5) ? " and the " : " ";
      out += pick(genre);
    }
    return out;
  }

  std::string decorate(std::string sentence, const UserModel& u, int star) {
    // Slang substitutions, word by word.
    if (u.slang_rate > 0.0) {
      std::string out;
      std::size_t start = 0;
      while (start <= sentence.size()) {
        std::size_t end = sentence.find(' ', start);
        if (end == std::string::npos) end = sentence.size();
        std::string w = sentence.substr(start, end - start);
        for (const auto& [plain, slang] : kSlang) {
          if (w == plain && chance(u.slang_rate)) w = slang;
        }
        if (!out.empty()) out += ' ';
        out += w;
        start = end + 1;
      }
      sentence = std::move(out);
      if (chance(u.slang_rate * 0.3)) sentence += chance(0.5) ? " lol" : " omg";
    }
    if (chance(u.shout_rate)) {
      for (char& c : sentence) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    } else if (!sentence.empty()) {
      sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
    }
    if (chance(u.number_rate)) {
      sentence += chance(0.5) ? " " + std::to_string(2 * star) + "/10"
                              : " " + std::to_string(star) + " stars";
    }
    const double b = rng_.unit();
    if (b < u.bang_rate * 0.3) {
      sentence += "!!!";
    } else if (b < u.bang_rate * 0.6) {
      sentence += "!";
    } else if (b < u.bang_rate * 0.7) {
      sentence += "...";
    } else {
      sentence += ".";
    }
    return sentence;
  }

  std::string review_text(const UserModel& u, const ItemModel& item, int star) {
    std::string text;
    const std::size_t n = u.verbosity + static_cast<std::size_t>(rng_.below(3));
    for (std::size_t s = 0; s < n; ++s) {
      const double x = rng_.unit();
      std::string sentence;
      if (x < 0.35) {
        sentence = sentiment_phrase(star);
      } else if (x < 0.65) {
        sentence = topic_phrase(item);
      } else if (x < 0.78) {
        sentence = pick(u.catchphrases);
      } else {
        sentence = std::string(pick(kFiller));
      }
      if (!text.empty()) text += ' ';
      text += decorate(std::move(sentence), u, star);
    }
    return text;
  }

  SyntheticCorpusSpec spec_;
  SeededRng rng_;
  std::vector<ItemModel> items_;
  std::vector<UserModel> users_;
};

}  // namespace

std::vector<Review> generate_synthetic_corpus(const SyntheticCorpusSpec& spec) {
  return Generator(spec).run();
}

}  // namespace revpred
