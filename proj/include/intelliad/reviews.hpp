#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace intelliad::reviews {

struct ReviewRecord {
  std::string app_id;
  int rating = 0;  // 1..5
  std::string date;  // YYYY-MM-DD
  std::string text;
};

/// One JSON object per line: {"app_id":..,"rating":..,"date":..,"text":..}.
/// Blank lines are skipped. Errors carry the line number (MalformedReview).
std::vector<ReviewRecord> parse_reviews_jsonl(std::string_view text);
std::vector<ReviewRecord> load_reviews(const std::filesystem::path& path);
std::string to_jsonl(const std::vector<ReviewRecord>& reviews);

/// Lower-cased ASCII word tokens. Apostrophes are dropped ("don't" -> "dont");
/// any other non-alphanumeric byte separates words.
std::vector<std::string> tokenize(std::string_view text);

using StopwordSet = std::unordered_set<std::string>;
/// Small English list shipped with the tool (data/stopwords.txt).
const StopwordSet& default_stopwords();
/// One word per line; '#' starts a comment.
StopwordSet parse_stopwords(std::string_view text);
StopwordSet load_stopwords(const std::filesystem::path& path);

/// Keeps reviews mentioning "ad", "ads" or an "advert..." word, in order.
std::vector<ReviewRecord> filter_ad_reviews(const std::vector<ReviewRecord>& reviews);
bool mentions_ads(std::string_view text);

struct PhraseCandidate {
  std::array<std::string, 2> tokens;
  std::size_t count = 0;

  std::string text() const { return tokens[0] + " " + tokens[1]; }
  friend bool operator==(const PhraseCandidate&, const PhraseCandidate&) = default;
};

/// Adjacent word pairs after stopword removal, counted over all reviews and
/// ordered by count (descending) then lexicographically.
std::vector<PhraseCandidate> extract_phrase_candidates(const std::vector<ReviewRecord>& reviews,
                                                       const StopwordSet& stopwords);

/// Stopword-free token lists, one per review; the corpus the built-in
/// embedding is trained on.
std::vector<std::vector<std::string>> content_tokens(const std::vector<ReviewRecord>& reviews,
                                                     const StopwordSet& stopwords);

/// Fraction of reviews containing a token that starts with `prefix`.
double share_mentioning(const std::vector<ReviewRecord>& reviews, std::string_view prefix);

enum class CostType { NumAds, MemCpu, Traffic, Battery };
inline constexpr std::array<CostType, 4> kAllCostTypes{CostType::NumAds, CostType::MemCpu,
                                                       CostType::Traffic, CostType::Battery};
std::string_view to_string(CostType type) noexcept;
std::optional<CostType> parse_cost_type(std::string_view name) noexcept;

/// Cost type -> lower-case keywords and key phrases.
class KeywordTable {
 public:
  /// Entries are lower-cased and whitespace-normalised. Every cost type needs
  /// at least one entry (MalformedKeywordTable otherwise).
  explicit KeywordTable(std::map<CostType, std::vector<std::string>> entries);

  const std::vector<std::string>& keywords(CostType type) const { return entries_.at(type); }
  const std::map<CostType, std::vector<std::string>>& entries() const noexcept { return entries_; }

 private:
  std::map<CostType, std::vector<std::string>> entries_;
};

/// The keyword table used for classifying complaints about each ad cost.
const KeywordTable& default_keyword_table();
/// JSON object: cost type name ("NumAds", "MemCpu", "Traffic", "Battery") ->
/// list of strings.
KeywordTable parse_keyword_table(std::string_view json_text);
KeywordTable load_keyword_table(const std::filesystem::path& path);
std::string keyword_table_to_json(const KeywordTable& table);

/// True when the keyword's words occur consecutively in `tokens`. The first
/// word must start a token, and the last word may be a prefix of a longer
/// token ("many ad" matches "many ads", "drain" matches "draining", "ram"
/// does not match "program").
bool matches_keyword(const std::vector<std::string>& tokens, std::string_view keyword);

/// Every cost type with a matching keyword, for reviews rated strictly below
/// `rating_cutoff`; empty otherwise.
std::set<CostType> classify_review(const ReviewRecord& review, const KeywordTable& table,
                                   int rating_cutoff = 3);

struct RatingCell {
  double mean = 0.0;
  std::size_t count = 0;
};

using SchemeCostKey = std::pair<std::string, CostType>;

/// Mean rating of classified reviews per (scheme, cost type). Combinations
/// without reviews are absent. Throws UnmappedApp for an app_id missing from
/// `scheme_of_app`.
std::map<SchemeCostKey, RatingCell> aggregate_cost_ratings(
    const std::vector<ReviewRecord>& reviews, const KeywordTable& table,
    const std::map<std::string, std::string>& scheme_of_app, int rating_cutoff = 3);

/// Same mean, pooled over all schemes.
std::map<CostType, RatingCell> global_cost_ratings(const std::vector<ReviewRecord>& reviews,
                                                   const KeywordTable& table,
                                                   int rating_cutoff = 3);

}  // namespace intelliad::reviews
