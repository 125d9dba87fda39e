#include <bit>
#include <cstring>
#include <fstream>

#include "revpred/errors.hpp"
#include "revpred/profiles.hpp"

namespace revpred {
namespace {

constexpr char kMagic[8] = {'R', 'V', 'P', 'S', 'N', 'A', 'P', '\0'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kTrailer = 0x454e4421;  // "END!"

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void pod(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  void str(std::string_view s) {
    pod(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, const std::filesystem::path& path) : in_(in), path_(path) {}

  template <typename T>
  T pod() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof v);
    check();
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint32_t>();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    check();
    return s;
  }
  void check() const {
    if (!in_) throw DataError("truncated profile snapshot '" + path_.string() + "'");
  }

 private:
  std::istream& in_;
  const std::filesystem::path& path_;
};

}  // namespace

void save_snapshot(const std::filesystem::path& path, const ProfileIndex& index,
                   std::uint64_t key) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write profile snapshot '" + path.string() + "'");
  Writer w(out);
  out.write(kMagic, sizeof kMagic);
  w.pod(kVersion);
  w.pod(key);
  const Vocabulary& vocab = index.vocabulary();
  w.pod(static_cast<std::uint64_t>(vocab.size()));
  for (TermId t = 0; t < vocab.size(); ++t) w.str(vocab.term(t));
  const auto reviews = index.normalized_reviews();
  w.pod(static_cast<std::uint64_t>(reviews.size()));
  for (const NormalizedReview& r : reviews) {
    w.str(r.user_id);
    w.str(r.item_id);
    w.pod(static_cast<std::int32_t>(r.rating));
    w.pod(r.timestamp);
    w.pod(static_cast<std::uint32_t>(r.tokens.size()));
    for (TermId t : r.tokens) w.pod(t);
  }
  w.pod(kTrailer);
  if (!out) throw DataError("write failed for profile snapshot '" + path.string() + "'");
}

std::optional<ProfileIndex> load_snapshot(const std::filesystem::path& path, std::uint64_t key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw DataError("'" + path.string() + "' is not a profile snapshot");
  }
  Reader r(in, path);
  if (r.pod<std::uint32_t>() != kVersion) return std::nullopt;
  if (r.pod<std::uint64_t>() != key) return std::nullopt;

  Vocabulary vocab;
  const auto n_terms = r.pod<std::uint64_t>();
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    if (vocab.intern(r.str()) != t) {
      throw DataError("duplicate term in profile snapshot '" + path.string() + "'");
    }
  }
  std::vector<NormalizedReview> reviews(r.pod<std::uint64_t>());
  for (NormalizedReview& rev : reviews) {
    rev.user_id = r.str();
    rev.item_id = r.str();
    rev.rating = r.pod<std::int32_t>();
    rev.timestamp = r.pod<std::int64_t>();
    rev.tokens.resize(r.pod<std::uint32_t>());
    for (TermId& t : rev.tokens) {
      t = r.pod<TermId>();
      if (t >= n_terms) throw DataError("term id out of range in '" + path.string() + "'");
    }
    if (!is_valid_star(rev.rating)) throw DataError("bad star in '" + path.string() + "'");
  }
  if (r.pod<std::uint32_t>() != kTrailer) {
    throw DataError("corrupt profile snapshot '" + path.string() + "'");
  }
  if (reviews.empty()) throw DataError("empty profile snapshot '" + path.string() + "'");
  return ProfileIndex::assemble(std::move(vocab), std::move(reviews));
}

}  // namespace revpred
