#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "revpred/corpus.hpp"
#include "revpred/errors.hpp"
#include "utf8.hpp"

namespace revpred {
namespace {

using nlohmann::json;

json to_json(const Review& r) {
  return json{{"user_id", r.user_id},
              {"item_id", r.item_id},
              {"profile_name", r.profile_name},
              {"rating", r.rating},
              {"helpful", {r.helpfulness.found, r.helpfulness.total}},
              {"time", r.timestamp},
              {"summary", r.summary},
              {"text", r.text}};
}

Review from_json(const json& j) {
  Review r;
  r.user_id = j.at("user_id").get<std::string>();
  r.item_id = j.at("item_id").get<std::string>();
  r.rating = j.at("rating").get<int>();
  r.text = j.at("text").get<std::string>();
  r.profile_name = j.value("profile_name", std::string{});
  r.summary = j.value("summary", std::string{});
  r.timestamp = j.value("time", std::int64_t{0});
  if (auto it = j.find("helpful"); it != j.end()) {
    r.helpfulness = {it->at(0).get<std::int64_t>(), it->at(1).get<std::int64_t>()};
  }
  if (r.user_id.empty() || r.item_id.empty()) throw std::invalid_argument("empty user_id or item_id");
  if (!is_valid_star(r.rating)) throw std::invalid_argument("rating outside 1..5");
  if (r.helpfulness.found < 0 || r.helpfulness.found > r.helpfulness.total) {
    throw std::invalid_argument("inconsistent helpfulness");
  }
  return r;
}

}  // namespace

void write_ndjson(std::ostream& out, std::span<const Review> reviews) {
  for (const Review& r : reviews) {
    out << to_json(r).dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

ParseResult read_ndjson(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0, record = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      result.reviews.push_back(from_json(json::parse(utf8::sanitize(line))));
    } catch (const std::exception& e) {
      result.errors.push_back({line_no, record,
                               "record #" + std::to_string(record + 1) + " at line " +
                                   std::to_string(line_no) + ": " + e.what()});
    }
    ++record;
  }
  return result;
}

Dataset load_dataset(const std::filesystem::path& path, std::vector<ParseIssue>* issues) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file '" + path.string() + "'");
  char first = '\0';
  while (in.get(first) && utf8::is_ascii_space(first)) {
  }
  in.clear();
  in.seekg(0);
  ParseResult parsed = first == '{' ? read_ndjson(in) : parse_snap_stream(in);
  if (issues) {
    issues->insert(issues->end(), parsed.errors.begin(), parsed.errors.end());
  }
  return make_dataset(std::move(parsed.reviews), "loaded " + path.string() + " (" +
                                                     std::to_string(parsed.errors.size()) +
                                                     " malformed records skipped)");
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset file '" + path.string() + "'");
  write_ndjson(out, dataset.reviews);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace revpred
