#pragma once

// Small builders shared by the unit and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "revpred/corpus.hpp"
#include "revpred/random.hpp"
#include "revpred/textnorm.hpp"

namespace revpred::testing {

inline Review review(std::string user, std::string item, int rating, std::string text = "x",
                     std::int64_t time = 0) {
  Review r;
  r.user_id = std::move(user);
  r.item_id = std::move(item);
  r.rating = rating;
  r.timestamp = time;
  r.text = std::move(text);
  return r;
}

inline Dataset dataset(std::vector<Review> reviews) {
  return make_dataset(std::move(reviews), "fixture");
}

/// Whitespace tokens of the raw text; the pipeline with every step off.
inline NormConfig raw_tokens() {
  NormConfig c;
  c.steps = NormSteps::none();
  return c;
}

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    const auto base = std::filesystem::temp_directory_path();
    const std::uint64_t salt = splitmix64(fnv1a64(tag) ^ ++counter ^
                                          reinterpret_cast<std::uintptr_t>(this));
    path_ = base / ("revpred-test-" + tag + "-" + std::to_string(salt % 1000000007));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// One SNAP record with the given fields, followed by a blank line.
inline std::string snap_record(const std::string& item, const std::string& user, const std::string& score,
                               const std::string& text, std::int64_t time = 1000) {
  return "product/productId: " + item + "\nreview/userId: " + user +
         "\nreview/profileName: someone\nreview/helpfulness: 0/0\nreview/score: " + score +
         "\nreview/time: " + std::to_string(time) + "\nreview/summary: s\nreview/text: " + text +
         "\n\n";
}

}  // namespace revpred::testing
