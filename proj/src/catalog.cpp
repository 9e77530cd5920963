#include "intelliad/catalog.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "intelliad/error.hpp"
#include "intelliad/io.hpp"

namespace intelliad {

using nlohmann::json;

namespace {

// Keep in sync with data/catalog.json (a unit test compares the two).
constexpr std::string_view kDefaultCatalog = R"json({
  "AdMob": {
    "type_prefixes": ["com.google.android.gms.ads.", "com.google.ads."],
    "format_constants": {
      "BANNER": "Banner",
      "SMART_BANNER": "SmartBanner",
      "FULL_BANNER": "FullBanner",
      "INTERSTITIAL": "Interstitial",
      "InterstitialAd": "Interstitial",
      "RewardedVideoAd": "Video"
    },
    "layout_markers": ["com.google.android.gms.ads.AdView", "ads:adSize"]
  },
  "Amazon": {
    "type_prefixes": ["com.amazon.device.ads."],
    "format_constants": {
      "SIZE_320x50": "Banner",
      "SIZE_AUTO": "SmartBanner",
      "SIZE_468x60": "FullBanner",
      "InterstitialAd": "Interstitial"
    },
    "layout_markers": ["com.amazon.device.ads.AdLayout", "amazon:adSize"]
  },
  "InMobi": {
    "type_prefixes": ["com.inmobi."],
    "format_constants": {
      "InMobiBanner": "Banner",
      "IMBanner": "Banner",
      "InMobiInterstitial": "Interstitial",
      "IMInterstitial": "Interstitial"
    },
    "layout_markers": ["com.inmobi.ads.InMobiBanner", "com.inmobi.monetization.IMBanner"]
  },
  "MoPub": {
    "type_prefixes": ["com.mopub."],
    "format_constants": {
      "MoPubView": "Banner",
      "MoPubInterstitial": "Interstitial",
      "MoPubRewardedVideos": "Video"
    },
    "layout_markers": ["com.mopub.mobileads.MoPubView"]
  }
}
)json";

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedCatalog, what);
}

std::vector<std::string> string_list(const json& node, const std::string& ctx) {
  if (!node.is_array()) malformed(ctx + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.is_string()) malformed(ctx + " must be an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

// Package-only references ("import com.mopub.mobileads.*") lack the trailing
// separator the prefixes carry.
bool prefix_matches(std::string_view prefix, std::string_view dotted_type) noexcept {
  if (dotted_type.starts_with(prefix)) return true;
  return prefix.size() == dotted_type.size() + 1 && prefix.back() == '.' &&
         prefix.starts_with(dotted_type);
}

}  // namespace

std::string_view to_string(AdFormat format) noexcept {
  switch (format) {
    case AdFormat::Banner: return "Banner";
    case AdFormat::SmartBanner: return "SmartBanner";
    case AdFormat::FullBanner: return "FullBanner";
    case AdFormat::Interstitial: return "Interstitial";
    case AdFormat::Video: return "Video";
  }
  return "Unknown";
}

std::optional<AdFormat> parse_ad_format(std::string_view name) noexcept {
  for (AdFormat f : {AdFormat::Banner, AdFormat::SmartBanner, AdFormat::FullBanner,
                     AdFormat::Interstitial, AdFormat::Video}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::optional<AdSize> nominal_size(AdFormat format) noexcept {
  switch (format) {
    case AdFormat::Banner: return AdSize{320, 50};
    case AdFormat::FullBanner: return AdSize{468, 60};
    default: return std::nullopt;
  }
}

bool AdNetwork::owns_type(std::string_view dotted_type) const noexcept {
  return std::any_of(type_prefixes.begin(), type_prefixes.end(),
                     [&](const std::string& p) { return prefix_matches(p, dotted_type); });
}

AdNetworkCatalog AdNetworkCatalog::from_json_text(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) malformed("catalog root must be an object");
  if (root.empty()) malformed("catalog has no networks");

  AdNetworkCatalog catalog;
  std::set<std::string> seen_prefixes;
  for (const auto& [name, entry] : root.items()) {
    if (!entry.is_object()) malformed("entry '" + name + "' must be an object");
    AdNetwork net;
    net.name = name;

    if (!entry.contains("type_prefixes")) malformed("'" + name + "' lacks type_prefixes");
    net.type_prefixes = string_list(entry["type_prefixes"], name + ".type_prefixes");
    if (net.type_prefixes.empty()) malformed("'" + name + "' has no type prefixes");
    for (const auto& prefix : net.type_prefixes) {
      if (prefix.empty()) malformed("'" + name + "' has an empty type prefix");
      if (!seen_prefixes.insert(prefix).second) {
        malformed("type prefix '" + prefix + "' is listed more than once");
      }
    }

    if (entry.contains("format_constants")) {
      const auto& fc = entry["format_constants"];
      if (!fc.is_object()) malformed(name + ".format_constants must be an object");
      for (const auto& [constant, value] : fc.items()) {
        if (!value.is_string()) malformed("format constant '" + constant + "' must map to a string");
        auto format = parse_ad_format(value.get<std::string>());
        if (!format) {
          malformed("format constant '" + constant + "' maps to unknown format '" +
                    value.get<std::string>() + "'");
        }
        net.format_constants.emplace(constant, *format);
      }
    }
    if (entry.contains("layout_markers")) {
      net.layout_markers = string_list(entry["layout_markers"], name + ".layout_markers");
    }
    catalog.networks_.push_back(std::move(net));
  }
  std::sort(catalog.networks_.begin(), catalog.networks_.end(),
            [](const AdNetwork& a, const AdNetwork& b) { return a.name < b.name; });
  return catalog;
}

const AdNetwork* AdNetworkCatalog::find(std::string_view name) const noexcept {
  for (const auto& net : networks_) {
    if (net.name == name) return &net;
  }
  return nullptr;
}

const AdNetwork* AdNetworkCatalog::owner_of_type(std::string_view dotted_type) const noexcept {
  // Longest matching prefix wins so nested SDK packages can be split out.
  const AdNetwork* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& net : networks_) {
    for (const auto& prefix : net.type_prefixes) {
      if (prefix.size() > best_len && prefix_matches(prefix, dotted_type)) {
        best = &net;
        best_len = prefix.size();
      }
    }
  }
  return best;
}

std::string AdNetworkCatalog::to_json_text() const {
  json root = json::object();
  for (const auto& net : networks_) {
    json fc = json::object();
    for (const auto& [constant, format] : net.format_constants) {
      fc[constant] = std::string(to_string(format));
    }
    root[net.name] = {{"type_prefixes", net.type_prefixes},
                      {"format_constants", fc},
                      {"layout_markers", net.layout_markers}};
  }
  return root.dump(2) + "\n";
}

AdNetworkCatalog load_catalog(const std::filesystem::path& path) {
  return AdNetworkCatalog::from_json_text(io::read_file(path, ErrorCode::MalformedCatalog));
}

const AdNetworkCatalog& default_catalog() {
  static const AdNetworkCatalog catalog = AdNetworkCatalog::from_json_text(kDefaultCatalog);
  return catalog;
}

}  // namespace intelliad
