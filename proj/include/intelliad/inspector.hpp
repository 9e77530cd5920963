#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "intelliad/catalog.hpp"

namespace intelliad {

enum class InputKind { DecompiledTree, RawDex };

struct AppPackageInput {
  InputKind kind;
  // Apktool output directory, or a .dex file / directory of .dex files.
  std::filesystem::path root;
};

struct Placement {
  std::string network;
  AdFormat format;
  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Ads found in one app, in detection order. Duplicates are real: an app may
/// embed two banners from the same network.
struct AdIntegrationScheme {
  std::vector<Placement> placements;
  std::vector<std::string> warnings;

  std::size_t ad_count() const noexcept { return placements.size(); }
};

/// A network is reported when any of its type prefixes is referenced.
///
/// DecompiledTree: .smali and .java files are scanned for dotted (com.a.B)
/// and descriptor (Lcom/a/B;) references; Java simple names are resolved
/// through the file's imports. RawDex: only the DEX type table is read.
std::set<std::string> detect_networks(const AppPackageInput& input,
                                      const AdNetworkCatalog& catalog);

/// Resolves placements along two routes, in file order (files sorted by path):
///
///  * code: a format constant read off a network type (AdSize.BANNER,
///    Lcom/.../AdSize;->BANNER) or the instantiation of a network class whose
///    simple name is a format constant (new InterstitialAd(...),
///    new-instance v0, Lcom/mopub/mobileads/MoPubInterstitial;);
///  * layout: a layout id referenced in code (R.id.name, R$id;->name:I) with a
///    network type referenced on the same line or the next three non-blank
///    lines (the cast after findViewById). The id is looked up in res/layout*/ XML; the
///    element's ad-size attribute or class name gives the format. Each id
///    counts once.
///
/// An ad id that no layout declares is recorded as a Banner placement with a
/// warning. RawDex input raises UnsupportedInputKind.
AdIntegrationScheme extract_ad_formats(const AppPackageInput& input,
                                       const AdNetworkCatalog& catalog);

/// {"app_id":..,"placements":[{"network":..,"format":..}],"ad_count":n,"warnings":[..]}
std::string scheme_report_json(const std::string& app_id, const AdIntegrationScheme& scheme);

}  // namespace intelliad
