#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"

#include "intelliad/error.hpp"
#include "intelliad/random.hpp"
#include "intelliad/reviews.hpp"

using namespace intelliad;
using namespace intelliad::reviews;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an intelliad::Error");
  return ErrorCode::IoError;
}

ReviewRecord review(std::string text, int rating = 1, std::string app = "app") {
  return {std::move(app), rating, "2016-04-01", std::move(text)};
}

std::string fixture(const std::string& name) {
  return std::string(INTELLIAD_SOURCE_DIR) + "/tests/fixtures/" + name;
}

using TypeSet = std::set<CostType>;

}  // namespace

TEST_SUITE("reviews") {

TEST_CASE("tokenizer") {
  CHECK(tokenize("Don't SHOW me 3 ads!!") ==
        std::vector<std::string>{"dont", "show", "me", "3", "ads"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("data-rate,wifi") == std::vector<std::string>{"data", "rate", "wifi"});
}

TEST_CASE("JSONL parsing") {
  const auto r = parse_reviews_jsonl(
      "{\"app_id\":\"a\",\"rating\":2,\"date\":\"2016-04-01\",\"text\":\"hi\"}\n\n"
      "{\"app_id\":\"b\",\"rating\":5,\"date\":\"2016-04-02\",\"text\":\"x, \\\"y\\\"\"}\n");
  REQUIRE(r.size() == 2);
  CHECK(r[1].text == "x, \"y\"");
  CHECK(parse_reviews_jsonl(to_jsonl(r)).size() == 2);
  CHECK(parse_reviews_jsonl(to_jsonl(r))[1].text == r[1].text);

  auto line_of = [](const std::string& text) {
    try {
      parse_reviews_jsonl(text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedReview);
      return e.line();
    }
    return std::size_t{0};
  };
  const std::string good = "{\"app_id\":\"a\",\"rating\":2,\"date\":\"2016-04-01\",\"text\":\"t\"}\n";
  CHECK(line_of(good + "{nope\n") == 2);
  CHECK(line_of(good + good + "{\"app_id\":\"a\",\"rating\":6,\"date\":\"2016-04-01\",\"text\":\"t\"}\n") == 3);
  CHECK(line_of("{\"app_id\":\"a\",\"rating\":2,\"date\":\"16-4-1\",\"text\":\"t\"}\n") == 1);
  CHECK(line_of("{\"app_id\":\"a\",\"rating\":2,\"date\":\"2016-04-01\"}\n") == 1);
}

TEST_CASE("ad filter") {
  CHECK(mentions_ads("too many ads"));
  CHECK(mentions_ads("Advertising everywhere"));
  CHECK(mentions_ads("one ad per level"));
  CHECK(mentions_ads("ADVERTS"));
  CHECK_FALSE(mentions_ads("this made my day"));
  CHECK_FALSE(mentions_ads("add a dark mode"));
  CHECK_FALSE(mentions_ads("loads fast, bad ui"));

  const std::vector<ReviewRecord> all{review("ads!"), review("made it"), review("advertising"),
                                      review("nothing")};
  const auto once = filter_ad_reviews(all);
  REQUIRE(once.size() == 2);
  CHECK(once[0].text == "ads!");
  const auto twice = filter_ad_reviews(once);
  REQUIRE(twice.size() == once.size());
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(twice[i].text == once[i].text);
}

TEST_CASE("stopwords") {
  const auto file = load_stopwords(std::string(INTELLIAD_SOURCE_DIR) + "/data/stopwords.txt");
  CHECK(file == default_stopwords());
  CHECK(default_stopwords().count("the"));
  CHECK_FALSE(default_stopwords().count("battery"));
  CHECK(parse_stopwords("# c\n a \n\nB # trailing\n") == StopwordSet{"a", "b"});
}

TEST_CASE("phrase candidates") {
  const auto c = extract_phrase_candidates({review("battery drain battery drain")}, {});
  REQUIRE(c.size() == 2);
  CHECK(c[0] == PhraseCandidate{{"battery", "drain"}, 2});
  CHECK(c[1] == PhraseCandidate{{"drain", "battery"}, 1});
  CHECK(c[0].text() == "battery drain");

  // Pairs do not span reviews; stopwords are removed before pairing.
  const auto d = extract_phrase_candidates({review("the ads are annoying"), review("annoying ads")},
                                           default_stopwords());
  REQUIRE(d.size() == 2);
  CHECK(d[0] == PhraseCandidate{{"ads", "annoying"}, 1});
  CHECK(d[1] == PhraseCandidate{{"annoying", "ads"}, 1});
}

TEST_CASE("phrase candidates match a brute-force count") {
  const std::vector<std::string> vocab{"the", "ads", "battery", "drain", "a", "so", "many", "slow"};
  const StopwordSet stop{"the", "a", "so"};
  Rng rng(11);
  std::vector<ReviewRecord> reviews;
  for (int i = 0; i < 20; ++i) {
    std::string text;
    const auto n = rng.below(9);
    for (std::uint64_t j = 0; j < n; ++j) text += vocab[rng.below(vocab.size())] + " ";
    reviews.push_back(review(text));
  }
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& r : reviews) {
    std::vector<std::string> kept;
    for (const auto& t : tokenize(r.text)) {
      if (!stop.count(t)) kept.push_back(t);
    }
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) ++counts[{kept[i], kept[i + 1]}];
  }
  std::vector<PhraseCandidate> expected;
  for (const auto& [k, n] : counts) expected.push_back({{k.first, k.second}, n});
  std::stable_sort(expected.begin(), expected.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });
  CHECK(extract_phrase_candidates(reviews, stop) == expected);
}

TEST_CASE("share mentioning") {
  const std::vector<ReviewRecord> r{review("so annoying"), review("Annoyed"), review("fine"),
                                    review("not annoy")};
  CHECK(share_mentioning(r, "annoy") == 0.75);
  CHECK(share_mentioning({}, "annoy") == 0.0);
}

TEST_CASE("keyword matching") {
  const auto t = tokenize("So many ads, they drain the battery; a program");
  CHECK(matches_keyword(t, "many ad"));
  CHECK(matches_keyword(t, "drain"));
  CHECK(matches_keyword(t, "battery"));
  CHECK_FALSE(matches_keyword(t, "ram"));
  CHECK_FALSE(matches_keyword(t, "ads drain"));
  CHECK_FALSE(matches_keyword(t, "lot of ad"));
  CHECK(matches_keyword(tokenize("a lot of adverts"), "lot of ad"));
  CHECK(matches_keyword(tokenize("draining fast"), "drain"));
}

TEST_CASE("keyword table") {
  const auto& def = default_keyword_table();
  for (auto type : kAllCostTypes) CHECK_FALSE(def.keywords(type).empty());
  const auto again = parse_keyword_table(keyword_table_to_json(def));
  CHECK(again.entries() == def.entries());
  CHECK(load_keyword_table(std::string(INTELLIAD_SOURCE_DIR) + "/data/keywords.json").entries() ==
        def.entries());
  CHECK(KeywordTable({{CostType::NumAds, {"  Many   AD "}},
                      {CostType::MemCpu, {"x"}},
                      {CostType::Traffic, {"y"}},
                      {CostType::Battery, {"z"}}})
            .keywords(CostType::NumAds)[0] == "many ad");
  CHECK(code_of([] { KeywordTable({{CostType::NumAds, {"a"}}}); }) ==
        ErrorCode::MalformedKeywordTable);
  CHECK(code_of([] { parse_keyword_table(R"({"NumAds":["a"],"MemCpu":["b"],"Traffic":["c"],
      "Battery":["d"],"Privacy":["e"]})"); }) == ErrorCode::MalformedKeywordTable);
  CHECK(code_of([] { parse_keyword_table("[1]"); }) == ErrorCode::MalformedKeywordTable);
  for (auto type : kAllCostTypes) CHECK(parse_cost_type(to_string(type)) == type);
}

TEST_CASE("quoted complaints classify to their cost types") {
  const auto& table = default_keyword_table();
  const std::vector<std::pair<std::string, TypeSet>> quotes{
      {"So many ads and I paid money for the ad block and new filters and nothing happened",
       {CostType::NumAds}},
      {"Memory hog and need to add an exit button and ad blocker", {CostType::MemCpu}},
      {"With how little use the phone without WiFi, used 400MB of data rate, opening it only "
       "once. And all notifications that arrive are you just advertising. Uninstalled",
       {CostType::Traffic}},
      {"More ads increase more battery consumption. Settings are fake", {CostType::Battery}},
      {"Use pro version still face too much ads", {CostType::NumAds}},
      {"Beware this app use leadbolt ad network which place ads in your notification bar in the "
       "background even if you aren't currently use this app",
       {CostType::Traffic}},
      {"Why do they want your location to drain your battery and send you even more ads",
       {CostType::Battery}},
  };
  for (const auto& [text, expected] : quotes) {
    CAPTURE(text);
    CHECK(mentions_ads(text));
    CHECK(classify_review(review(text, 1), table) == expected);
    CHECK(classify_review(review(text, 2), table) == expected);
    CHECK(classify_review(review(text, 3), table).empty());
    CHECK(classify_review(review(text, 5), table).empty());
  }
}

TEST_CASE("classification ignores keyword order") {
  const auto& def = default_keyword_table();
  auto entries = def.entries();
  for (auto& [type, words] : entries) std::reverse(words.begin(), words.end());
  const KeywordTable reversed(entries);
  Rng rng(4);
  const std::vector<std::string> vocab{"ads", "many", "slow", "wifi", "battery", "drain",
                                       "lot", "of", "ad", "data", "rate", "fine"};
  for (int i = 0; i < 200; ++i) {
    std::string text;
    for (int j = 0; j < 6; ++j) text += vocab[rng.below(vocab.size())] + " ";
    CHECK(classify_review(review(text), def) == classify_review(review(text), reversed));
  }
}

TEST_CASE("ratings fixture reproduces the target means") {
  const auto all = load_reviews(fixture("reviews/reviews.jsonl"));
  const auto& table = default_keyword_table();
  const auto global = global_cost_ratings(all, table);
  CHECK(global.at(CostType::NumAds).mean == 1.152);
  CHECK(global.at(CostType::MemCpu).mean == 1.373);
  CHECK(global.at(CostType::Traffic).mean == 1.197);
  CHECK(global.at(CostType::Battery).mean == 1.198);
  CHECK(global.at(CostType::NumAds).count == 125);
  CHECK(global.at(CostType::Battery).count == 500);

  const std::map<std::string, std::string> schemes{
      {"com.example.a1", "A1"}, {"com.example.a2", "A2"}, {"com.example.a3", "A1"}};
  const auto cells = aggregate_cost_ratings(all, table, schemes);
  std::map<CostType, std::size_t> pooled;
  for (const auto& [key, cell] : cells) {
    CHECK(cell.mean >= 1.0);
    CHECK(cell.mean <= 2.0);
    pooled[key.second] += cell.count;
  }
  for (auto type : kAllCostTypes) CHECK(pooled[type] == global.at(type).count);

  auto shuffled = all;
  Rng rng(9);
  for (std::size_t j = shuffled.size() - 1; j > 0; --j) {
    std::swap(shuffled[j], shuffled[rng.below(j + 1)]);
  }
  const auto again = aggregate_cost_ratings(shuffled, table, schemes);
  REQUIRE(again.size() == cells.size());
  for (const auto& [key, cell] : cells) {
    CHECK(again.at(key).mean == cell.mean);
    CHECK(again.at(key).count == cell.count);
  }
}

TEST_CASE("unmapped apps are rejected") {
  const std::vector<ReviewRecord> r{review("too many ads", 1, "a"), review("slow", 1, "b")};
  CHECK(code_of([&] {
          aggregate_cost_ratings(r, default_keyword_table(), {{"a", "A1"}});
        }) == ErrorCode::UnmappedApp);
}

}
