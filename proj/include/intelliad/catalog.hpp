#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace intelliad {

enum class AdFormat { Banner, SmartBanner, FullBanner, Interstitial, Video };

std::string_view to_string(AdFormat format) noexcept;
std::optional<AdFormat> parse_ad_format(std::string_view name) noexcept;

struct AdSize {
  int width;
  int height;
  friend bool operator==(const AdSize&, const AdSize&) = default;
};

/// Banner is 320x50 and FullBanner 468x60. The other formats adapt to the
/// screen and have no fixed size.
std::optional<AdSize> nominal_size(AdFormat format) noexcept;

struct AdNetwork {
  std::string name;
  // Fully-qualified dotted prefixes, e.g. "com.google.android.gms.ads.".
  std::vector<std::string> type_prefixes;
  // A key is either a static field name read off an SDK type (BANNER in
  // AdSize.BANNER) or the simple name of an SDK class whose instantiation
  // fixes the format (InterstitialAd).
  std::map<std::string, AdFormat, std::less<>> format_constants;
  // Layout element tags or attribute names that mark an ad view.
  std::vector<std::string> layout_markers;

  bool owns_type(std::string_view dotted_type) const noexcept;
};

class AdNetworkCatalog {
 public:
  /// Validates: non-empty, every network has a prefix, no prefix shared by two
  /// entries, every format constant names a known AdFormat.
  static AdNetworkCatalog from_json_text(std::string_view text);

  const std::vector<AdNetwork>& networks() const noexcept { return networks_; }
  const AdNetwork* find(std::string_view name) const noexcept;
  const AdNetwork* owner_of_type(std::string_view dotted_type) const noexcept;

  std::string to_json_text() const;

 private:
  std::vector<AdNetwork> networks_;  // sorted by name
};

AdNetworkCatalog load_catalog(const std::filesystem::path& path);

/// Built-in catalog covering AdMob, Amazon, InMobi and MoPub.
const AdNetworkCatalog& default_catalog();

}  // namespace intelliad
