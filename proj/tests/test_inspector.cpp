#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "doctest.h"

#include "intelliad/error.hpp"
#include "intelliad/inspector.hpp"

using namespace intelliad;
namespace fs = std::filesystem;

namespace {

const fs::path kApps = fs::path(INTELLIAD_SOURCE_DIR) / "tests" / "fixtures" / "apps";

using Row = std::vector<std::pair<std::string, AdFormat>>;

Row sorted(Row r) {
  std::sort(r.begin(), r.end());
  return r;
}

Row placements_of(const AdIntegrationScheme& s) {
  Row r;
  for (const auto& p : s.placements) r.emplace_back(p.network, p.format);
  return sorted(r);
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("intelliad_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an intelliad::Error");
  return ErrorCode::IoError;
}

constexpr auto B = AdFormat::Banner;
constexpr auto S = AdFormat::SmartBanner;
constexpr auto F = AdFormat::FullBanner;
constexpr auto I = AdFormat::Interstitial;

}  // namespace

TEST_SUITE("inspector") {

TEST_CASE("fixture apps realise the twelve integration schemes") {
  const std::map<std::string, Row> expected{
      {"A1", {{"AdMob", B}}},
      {"A2", {{"AdMob", B}, {"AdMob", I}}},
      {"A3", {{"AdMob", S}}},
      {"A4", {{"AdMob", S}, {"AdMob", I}}},
      {"A5", {{"Amazon", B}}},
      {"A6", {{"MoPub", B}, {"MoPub", I}}},
      {"A7", {{"MoPub", B}, {"MoPub", I}, {"Amazon", B}, {"Amazon", I}}},
      {"A8", {{"AdMob", F}}},
      {"A9", {{"MoPub", B}}},
      {"A10", {{"AdMob", I}}},
      {"A11", {{"AdMob", S}, {"MoPub", B}}},
      {"A12", {{"AdMob", S}, {"InMobi", B}}},
  };
  for (const auto& [id, row] : expected) {
    CAPTURE(id);
    const AppPackageInput in{InputKind::DecompiledTree, kApps / id};
    const auto scheme = extract_ad_formats(in, default_catalog());
    CHECK(placements_of(scheme) == sorted(row));
    CHECK(scheme.ad_count() == row.size());
    CHECK(scheme.warnings.empty());
    std::set<std::string> nets;
    for (const auto& [n, f] : row) nets.insert(n);
    CHECK(detect_networks(in, default_catalog()) == nets);
  }
}

TEST_CASE("string literals and comments are not code references") {
  // A1 mentions AdSize.FULL_BANNER inside a string and AdSize.BANNER in a comment.
  const auto scheme = extract_ad_formats({InputKind::DecompiledTree, kApps / "A1"}, default_catalog());
  CHECK(scheme.ad_count() == 1);
}

TEST_CASE("dangling layout id is recorded as a banner with a warning") {
  const auto dir = temp_dir("dangling");
  write(dir / "sources/com/x/Main.java",
        "package com.x;\n"
        "import com.google.android.gms.ads.AdView;\n"
        "class Main {\n"
        "  void f() {\n"
        "    AdView v = (AdView) findViewById(R.id.missing_ad);\n"
        "  }\n"
        "}\n");
  const auto scheme = extract_ad_formats({InputKind::DecompiledTree, dir}, default_catalog());
  REQUIRE(scheme.ad_count() == 1);
  CHECK(scheme.placements[0] == Placement{"AdMob", AdFormat::Banner});
  REQUIRE(scheme.warnings.size() == 1);
  CHECK(scheme.warnings[0].starts_with("DanglingLayoutId"));
  fs::remove_all(dir);
}

TEST_CASE("layout ids of non-ad views are ignored") {
  const auto dir = temp_dir("nonad");
  write(dir / "res/layout/main.xml",
        "<LinearLayout xmlns:android=\"http://schemas.android.com/apk/res/android\">\n"
        "  <TextView android:id=\"@+id/label\" />\n"
        "</LinearLayout>\n");
  write(dir / "sources/com/x/Main.java",
        "package com.x;\n"
        "import com.google.android.gms.ads.AdRequest;\n"
        "class Main {\n"
        "  void f() {\n"
        "    TextView t = (TextView) findViewById(R.id.label);\n"
        "    AdRequest r = new AdRequest.Builder().build();\n"
        "  }\n"
        "}\n");
  const auto scheme = extract_ad_formats({InputKind::DecompiledTree, dir}, default_catalog());
  CHECK(scheme.ad_count() == 0);
  CHECK(detect_networks({InputKind::DecompiledTree, dir}, default_catalog()) ==
        std::set<std::string>{"AdMob"});
  fs::remove_all(dir);
}

TEST_CASE("layout element without a format attribute defaults to banner") {
  const auto dir = temp_dir("defaulted");
  write(dir / "res/layout-land/main.xml",
        "<FrameLayout xmlns:android=\"http://schemas.android.com/apk/res/android\">\n"
        "  <com.amazon.device.ads.AdLayout android:id=\"@+id/amazon_ad\" />\n"
        "</FrameLayout>\n");
  write(dir / "smali/com/x/Main.smali",
        ".class public Lcom/x/Main;\n"
        "    sget v0, Lcom/x/R$id;->amazon_ad:I\n"
        "\n"
        "    invoke-virtual {p0, v0}, Lcom/x/Main;->findViewById(I)Landroid/view/View;\n"
        "    move-result-object v0\n"
        "    check-cast v0, Lcom/amazon/device/ads/AdLayout;\n");
  const auto scheme = extract_ad_formats({InputKind::DecompiledTree, dir}, default_catalog());
  REQUIRE(scheme.ad_count() == 1);
  CHECK(scheme.placements[0] == Placement{"Amazon", AdFormat::Banner});
  CHECK(scheme.warnings.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("an id referenced twice counts once") {
  const auto dir = temp_dir("twice");
  write(dir / "res/layout/main.xml",
        "<FrameLayout xmlns:android=\"http://schemas.android.com/apk/res/android\"\n"
        "    xmlns:ads=\"http://schemas.android.com/apk/res-auto\">\n"
        "  <com.google.android.gms.ads.AdView android:id=\"@+id/ad\" ads:adSize=\"FULL_BANNER\" />\n"
        "</FrameLayout>\n");
  write(dir / "sources/com/x/Main.java",
        "package com.x;\n"
        "import com.google.android.gms.ads.AdView;\n"
        "class Main {\n"
        "  void f() { AdView a = (AdView) findViewById(R.id.ad); }\n"
        "  void g() { AdView b = (AdView) findViewById(R.id.ad); }\n"
        "}\n");
  const auto scheme = extract_ad_formats({InputKind::DecompiledTree, dir}, default_catalog());
  REQUIRE(scheme.ad_count() == 1);
  CHECK(scheme.placements[0] == Placement{"AdMob", AdFormat::FullBanner});
  fs::remove_all(dir);
}

TEST_CASE("wildcard imports still reveal the network") {
  const auto dir = temp_dir("wildcard");
  write(dir / "sources/com/x/Main.java",
        "package com.x;\n"
        "import com.mopub.mobileads.*;\n"
        "class Main {}\n");
  CHECK(detect_networks({InputKind::DecompiledTree, dir}, default_catalog()) ==
        std::set<std::string>{"MoPub"});
  fs::remove_all(dir);
}

TEST_CASE("unreadable inputs") {
  CHECK(code_of([] {
          extract_ad_formats({InputKind::DecompiledTree, "/nonexistent/app"}, default_catalog());
        }) == ErrorCode::UnreadableInput);
  const auto dir = temp_dir("nocode");
  write(dir / "README.txt", "nothing here\n");
  CHECK(code_of([&] { detect_networks({InputKind::DecompiledTree, dir}, default_catalog()); }) ==
        ErrorCode::UnreadableInput);
  CHECK(code_of([&] { detect_networks({InputKind::RawDex, dir}, default_catalog()); }) ==
        ErrorCode::UnreadableInput);
  fs::remove_all(dir);
}

TEST_CASE("scheme report JSON") {
  AdIntegrationScheme s;
  s.placements = {{"MoPub", AdFormat::Banner}};
  const auto text = scheme_report_json("com.x", s);
  CHECK(text ==
        "{\n  \"app_id\": \"com.x\",\n  \"placements\": [\n    {\n      \"network\": \"MoPub\",\n"
        "      \"format\": \"Banner\"\n    }\n  ],\n  \"ad_count\": 1,\n  \"warnings\": []\n}\n");
}

}
