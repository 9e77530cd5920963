#include "intelliad/reviews.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

#include "intelliad/error.hpp"
#include "intelliad/io.hpp"

namespace intelliad::reviews {

using nlohmann::json;

namespace {

// Keep in sync with data/stopwords.txt.
constexpr std::string_view kDefaultStopwords[] = {
    "a",     "about", "after", "again", "all",   "also",  "am",    "an",    "and",   "any",
    "are",   "as",    "at",    "be",    "been",  "before", "being", "but",   "by",    "can",
    "cant",  "could", "did",   "didnt", "do",    "does",  "doesnt", "dont", "even",  "for",
    "from",  "had",   "has",   "have",  "he",    "her",   "here",  "him",   "his",   "how",
    "i",     "if",    "im",    "in",    "into",  "is",    "isnt",  "it",    "its",   "ive",
    "just",  "me",    "my",    "now",   "of",    "on",    "once",  "only",  "or",    "our",
    "out",   "please", "really", "she", "so",    "some",  "such",  "than",  "that",  "the",
    "their", "them",  "then",  "there", "these", "they",  "this",  "those", "to",    "too",
    "up",    "us",    "very",  "was",   "we",    "were",  "what",  "when",  "where", "which",
    "while", "who",   "why",   "will",  "with",  "would", "you",   "your",
};

constexpr std::string_view kTable[4][11] = {
    {"many ad", "much ad", "free version", "paid app", "free app", "lot of ad"},
    {"memory", "slow", "hang", "ram", "cpu", "file", "wait", "laggy", "lagging", "delay", "suspend"},
    {"bandwidth", "wifi", "network", "data rate"},
    {"battery", "drain", "drainage", "charge", "recharge", "power"},
};

std::string normalise_keyword(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool valid_date(std::string_view d) {
  if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
  }
  const int month = (d[5] - '0') * 10 + (d[6] - '0');
  const int day = (d[8] - '0') * 10 + (d[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace

std::vector<ReviewRecord> parse_reviews_jsonl(std::string_view text) {
  std::vector<ReviewRecord> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::MalformedReview, "line " + std::to_string(line_no) + ": " + why, line_no);
    };
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error&) {
      fail("invalid JSON");
    }
    if (!doc.is_object()) fail("expected an object");
    for (const char* key : {"app_id", "date", "text"}) {
      if (!doc.contains(key) || !doc[key].is_string()) fail(std::string("missing string '") + key + "'");
    }
    if (!doc.contains("rating") || !doc["rating"].is_number_integer()) fail("missing integer 'rating'");
    ReviewRecord r;
    r.app_id = doc["app_id"].get<std::string>();
    r.rating = doc["rating"].get<int>();
    r.date = doc["date"].get<std::string>();
    r.text = doc["text"].get<std::string>();
    if (r.rating < 1 || r.rating > 5) fail("rating must lie in 1..5");
    if (!valid_date(r.date)) fail("date must be YYYY-MM-DD");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReviewRecord> load_reviews(const std::filesystem::path& path) {
  return parse_reviews_jsonl(io::read_file(path));
}

std::string to_jsonl(const std::vector<ReviewRecord>& reviews) {
  std::string out;
  for (const auto& r : reviews) {
    nlohmann::ordered_json doc;
    doc["app_id"] = r.app_id;
    doc["rating"] = r.rating;
    doc["date"] = r.date;
    doc["text"] = r.text;
    out += doc.dump() + '\n';
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '\'') continue;
    if (std::isalnum(u)) {
      current += static_cast<char>(std::tolower(u));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

const StopwordSet& default_stopwords() {
  static const StopwordSet words = [] {
    StopwordSet w;
    for (std::string_view s : kDefaultStopwords) w.emplace(s);
    return w;
  }();
  return words;
}

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (auto& w : tokenize(line)) out.insert(std::move(w));
  }
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  return parse_stopwords(io::read_file(path));
}

bool mentions_ads(std::string_view text) {
  for (const auto& tok : tokenize(text)) {
    if (tok == "ad" || tok == "ads" || tok.starts_with("advert")) return true;
  }
  return false;
}

std::vector<ReviewRecord> filter_ad_reviews(const std::vector<ReviewRecord>& reviews) {
  std::vector<ReviewRecord> out;
  std::copy_if(reviews.begin(), reviews.end(), std::back_inserter(out),
               [](const ReviewRecord& r) { return mentions_ads(r.text); });
  return out;
}

std::vector<std::vector<std::string>> content_tokens(const std::vector<ReviewRecord>& reviews,
                                                     const StopwordSet& stopwords) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(reviews.size());
  for (const auto& r : reviews) {
    auto tokens = tokenize(r.text);
    std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
    docs.push_back(std::move(tokens));
  }
  return docs;
}

std::vector<PhraseCandidate> extract_phrase_candidates(const std::vector<ReviewRecord>& reviews,
                                                       const StopwordSet& stopwords) {
  std::map<std::array<std::string, 2>, std::size_t> counts;
  for (const auto& doc : content_tokens(reviews, stopwords)) {
    for (std::size_t i = 0; i + 1 < doc.size(); ++i) ++counts[{doc[i], doc[i + 1]}];
  }
  std::vector<PhraseCandidate> out;
  out.reserve(counts.size());
  for (auto& [pair, n] : counts) out.push_back({pair, n});
  // counts is already lexicographic; a stable sort keeps that within a count.
  std::stable_sort(out.begin(), out.end(),
                   [](const PhraseCandidate& a, const PhraseCandidate& b) { return a.count > b.count; });
  return out;
}

double share_mentioning(const std::vector<ReviewRecord>& reviews, std::string_view prefix) {
  if (reviews.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& r : reviews) {
    const auto tokens = tokenize(r.text);
    if (std::any_of(tokens.begin(), tokens.end(),
                    [&](const std::string& t) { return t.starts_with(prefix); })) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(reviews.size());
}

std::string_view to_string(CostType type) noexcept {
  switch (type) {
    case CostType::NumAds: return "NumAds";
    case CostType::MemCpu: return "MemCpu";
    case CostType::Traffic: return "Traffic";
    case CostType::Battery: return "Battery";
  }
  return "Unknown";
}

std::optional<CostType> parse_cost_type(std::string_view name) noexcept {
  for (CostType t : kAllCostTypes) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

KeywordTable::KeywordTable(std::map<CostType, std::vector<std::string>> entries) {
  for (CostType t : kAllCostTypes) {
    auto it = entries.find(t);
    if (it == entries.end() || it->second.empty()) {
      throw Error(ErrorCode::MalformedKeywordTable,
                  "cost type " + std::string(to_string(t)) + " has no keywords");
    }
    std::vector<std::string>& list = entries_[t];
    for (const auto& raw : it->second) {
      std::string kw = normalise_keyword(raw);
      if (kw.empty()) throw Error(ErrorCode::MalformedKeywordTable, "empty keyword");
      list.push_back(std::move(kw));
    }
  }
}

const KeywordTable& default_keyword_table() {
  static const KeywordTable table = [] {
    std::map<CostType, std::vector<std::string>> entries;
    for (std::size_t i = 0; i < kAllCostTypes.size(); ++i) {
      for (std::string_view kw : kTable[i]) {
        if (!kw.empty()) entries[kAllCostTypes[i]].emplace_back(kw);
      }
    }
    return KeywordTable(std::move(entries));
  }();
  return table;
}

KeywordTable parse_keyword_table(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedKeywordTable, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedKeywordTable, "expected an object");
  std::map<CostType, std::vector<std::string>> entries;
  for (const auto& [name, list] : doc.items()) {
    const auto type = parse_cost_type(name);
    if (!type) throw Error(ErrorCode::MalformedKeywordTable, "unknown cost type '" + name + "'");
    if (!list.is_array()) throw Error(ErrorCode::MalformedKeywordTable, name + " must be a list");
    for (const auto& kw : list) {
      if (!kw.is_string()) throw Error(ErrorCode::MalformedKeywordTable, name + " entries must be strings");
      entries[*type].push_back(kw.get<std::string>());
    }
  }
  return KeywordTable(std::move(entries));
}

KeywordTable load_keyword_table(const std::filesystem::path& path) {
  return parse_keyword_table(io::read_file(path, ErrorCode::MalformedKeywordTable));
}

std::string keyword_table_to_json(const KeywordTable& table) {
  nlohmann::ordered_json doc;
  for (const auto& [type, list] : table.entries()) doc[std::string(to_string(type))] = list;
  return doc.dump(2) + "\n";
}

bool matches_keyword(const std::vector<std::string>& tokens, std::string_view keyword) {
  std::vector<std::string_view> words;
  std::size_t start = 0;
  while (start < keyword.size()) {
    auto space = keyword.find(' ', start);
    if (space == std::string_view::npos) space = keyword.size();
    if (space > start) words.push_back(keyword.substr(start, space - start));
    start = space + 1;
  }
  if (words.empty() || tokens.size() < words.size()) return false;
  for (std::size_t i = 0; i + words.size() <= tokens.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; ok && j + 1 < words.size(); ++j) ok = tokens[i + j] == words[j];
    if (ok && tokens[i + words.size() - 1].starts_with(words.back())) return true;
  }
  return false;
}

std::set<CostType> classify_review(const ReviewRecord& review, const KeywordTable& table,
                                   int rating_cutoff) {
  std::set<CostType> out;
  if (review.rating >= rating_cutoff) return out;
  const auto tokens = tokenize(review.text);
  for (const auto& [type, keywords] : table.entries()) {
    for (const auto& kw : keywords) {
      if (matches_keyword(tokens, kw)) {
        out.insert(type);
        break;
      }
    }
  }
  return out;
}

std::map<SchemeCostKey, RatingCell> aggregate_cost_ratings(
    const std::vector<ReviewRecord>& reviews, const KeywordTable& table,
    const std::map<std::string, std::string>& scheme_of_app, int rating_cutoff) {
  std::map<SchemeCostKey, std::pair<long long, std::size_t>> sums;
  for (const auto& r : reviews) {
    const auto it = scheme_of_app.find(r.app_id);
    if (it == scheme_of_app.end()) {
      throw Error(ErrorCode::UnmappedApp, "app '" + r.app_id + "' has no scheme mapping");
    }
    for (CostType t : classify_review(r, table, rating_cutoff)) {
      auto& [sum, n] = sums[{it->second, t}];
      sum += r.rating;
      ++n;
    }
  }
  std::map<SchemeCostKey, RatingCell> out;
  for (const auto& [key, acc] : sums) {
    out[key] = {static_cast<double>(acc.first) / static_cast<double>(acc.second), acc.second};
  }
  return out;
}

std::map<CostType, RatingCell> global_cost_ratings(const std::vector<ReviewRecord>& reviews,
                                                   const KeywordTable& table, int rating_cutoff) {
  std::map<CostType, std::pair<long long, std::size_t>> sums;
  for (const auto& r : reviews) {
    for (CostType t : classify_review(r, table, rating_cutoff)) {
      sums[t].first += r.rating;
      ++sums[t].second;
    }
  }
  std::map<CostType, RatingCell> out;
  for (const auto& [t, acc] : sums) {
    out[t] = {static_cast<double>(acc.first) / static_cast<double>(acc.second), acc.second};
  }
  return out;
}

}  // namespace intelliad::reviews
