#include "intelliad/dex.hpp"

#include <cstring>
#include <optional>

#include "intelliad/error.hpp"
#include "intelliad/io.hpp"

namespace intelliad::dex {
namespace {

constexpr std::size_t kHeaderSize = 0x70;
constexpr std::uint32_t kEndianConstant = 0x12345678;

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::DexParseError, what);
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t off) {
  if (off + 4 > b.size()) fail("read past end of file at offset " + std::to_string(off));
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

// Returns the decoded value and advances `off`.
std::uint32_t read_uleb128(std::span<const std::uint8_t> b, std::size_t& off) {
  std::uint32_t result = 0;
  for (int shift = 0; shift < 35; shift += 7) {
    if (off >= b.size()) fail("truncated uleb128");
    const std::uint8_t byte = b[off++];
    result |= static_cast<std::uint32_t>(byte & 0x7f) << shift;
    if ((byte & 0x80) == 0) return result;
  }
  fail("uleb128 longer than 5 bytes");
}

void check_table(std::span<const std::uint8_t> b, std::uint32_t count, std::uint32_t off,
                 const char* name) {
  if (count == 0) return;
  const std::uint64_t end = static_cast<std::uint64_t>(off) + 4ull * count;
  if (off < kHeaderSize || end > b.size()) {
    fail(std::string(name) + " table out of range");
  }
}

}  // namespace

std::vector<std::string> read_type_descriptors(std::span<const std::uint8_t> b) {
  if (b.size() < kHeaderSize) fail("file shorter than the DEX header");
  if (std::memcmp(b.data(), "dex\n", 4) != 0 || b[7] != 0) fail("bad magic");
  for (int i = 4; i < 7; ++i) {
    if (b[i] < '0' || b[i] > '9') fail("bad magic version");
  }
  if (read_u32(b, 0x28) != kEndianConstant) fail("unsupported endian tag");
  if (read_u32(b, 0x24) != kHeaderSize) fail("unexpected header_size");
  if (read_u32(b, 0x20) > b.size()) fail("file_size exceeds actual size");

  const std::uint32_t string_ids_size = read_u32(b, 0x38);
  const std::uint32_t string_ids_off = read_u32(b, 0x3c);
  const std::uint32_t type_ids_size = read_u32(b, 0x40);
  const std::uint32_t type_ids_off = read_u32(b, 0x44);
  check_table(b, string_ids_size, string_ids_off, "string_ids");
  check_table(b, type_ids_size, type_ids_off, "type_ids");

  std::vector<std::optional<std::string>> strings(string_ids_size);
  auto string_at = [&](std::uint32_t idx) -> const std::string& {
    if (idx >= string_ids_size) fail("type descriptor index out of range");
    auto& slot = strings[idx];
    if (!slot) {
      std::size_t off = read_u32(b, string_ids_off + 4ull * idx);
      if (off >= b.size()) fail("string data offset out of range");
      read_uleb128(b, off);  // utf16_size; the MUTF-8 bytes are NUL-terminated
      const void* nul = std::memchr(b.data() + off, 0, b.size() - off);
      if (nul == nullptr) fail("unterminated string data");
      const auto len = static_cast<const std::uint8_t*>(nul) - (b.data() + off);
      slot.emplace(reinterpret_cast<const char*>(b.data() + off), static_cast<std::size_t>(len));
    }
    return *slot;
  };

  std::vector<std::string> out;
  out.reserve(type_ids_size);
  for (std::uint32_t i = 0; i < type_ids_size; ++i) {
    out.push_back(string_at(read_u32(b, type_ids_off + 4ull * i)));
  }
  return out;
}

std::vector<std::string> read_type_descriptors(const std::filesystem::path& path) {
  const std::string data = io::read_file(path, ErrorCode::UnreadableInput);
  return read_type_descriptors(std::span(reinterpret_cast<const std::uint8_t*>(data.data()),
                                         data.size()));
}

std::string descriptor_to_dotted(std::string_view d) {
  while (!d.empty() && d.front() == '[') d.remove_prefix(1);
  if (d.size() < 3 || d.front() != 'L' || d.back() != ';') return {};
  std::string out(d.substr(1, d.size() - 2));
  for (char& c : out) {
    if (c == '/') c = '.';
  }
  return out;
}

}  // namespace intelliad::dex
