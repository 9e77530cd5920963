#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace intelliad::dex {

/// Reads the type_ids table of a DEX file and returns every type descriptor
/// in table order ("Lcom/mopub/mobileads/MoPubView;", "[I", ...).
///
/// Only the header, string_ids and type_ids sections are touched. Malformed
/// headers, out-of-range offsets and truncated string data raise
/// DexParseError.
std::vector<std::string> read_type_descriptors(std::span<const std::uint8_t> bytes);
std::vector<std::string> read_type_descriptors(const std::filesystem::path& path);

/// "Lcom/a/B;" -> "com.a.B"; array descriptors drop their '[' prefixes.
/// Primitive descriptors return an empty string.
std::string descriptor_to_dotted(std::string_view descriptor);

}  // namespace intelliad::dex
