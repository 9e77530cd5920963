#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "intelliad/error.hpp"

namespace intelliad::io {

/// Whole-file read. Missing or unreadable files raise `code`.
std::string read_file(const std::filesystem::path& path,
                      ErrorCode code = ErrorCode::IoError);

/// Writes to a sibling temp file and renames it over `path`, so readers never
/// observe a partial file. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

/// Resolves `p` against `base` unless it is already absolute.
std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p);

}  // namespace intelliad::io
