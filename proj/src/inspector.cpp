#include "intelliad/inspector.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"

#include "intelliad/dex.hpp"
#include "intelliad/error.hpp"
#include "intelliad/io.hpp"

namespace intelliad {
namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

// Non-blank lines after a layout id reference searched for the ad view's type.
constexpr std::size_t kIdTypeWindow = 3;

enum class EventKind { TypeRef, MemberRef, Instantiation, LayoutIdRef };

struct CodeEvent {
  EventKind kind;
  std::size_t line;
  std::string type;  // dotted, fully qualified where resolvable
  std::string name;  // member name or layout id
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string simple_name(std::string_view dotted) {
  const auto cut = dotted.find_last_of(".$");
  return std::string(cut == std::string_view::npos ? dotted : dotted.substr(cut + 1));
}

std::vector<std::string> split_dots(std::string_view chain) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto dot = chain.find('.', start);
    out.emplace_back(chain.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

std::string join_dots(const std::vector<std::string>& parts, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += '.';
    out += parts[i];
  }
  return out;
}

// --- smali -----------------------------------------------------------------

void scan_smali_line(std::string_view line, std::size_t line_no, std::vector<CodeEvent>& out) {
  const bool new_instance = trim(line).starts_with("new-instance");
  bool first_descriptor = true;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] != 'L') {
      ++i;
      continue;
    }
    // L seg(/seg)+ ;
    std::size_t j = i + 1;
    bool has_slash = false;
    bool ok = j < line.size() && is_ident_start(line[j]);
    while (ok && j < line.size() && line[j] != ';') {
      if (line[j] == '/') {
        has_slash = true;
        ok = j + 1 < line.size() && is_ident_start(line[j + 1]);
      } else if (!is_ident_char(line[j])) {
        ok = false;
      }
      if (ok) ++j;
    }
    if (!ok || !has_slash || j >= line.size()) {
      ++i;
      continue;
    }
    std::string dotted = dex::descriptor_to_dotted(line.substr(i, j - i + 1));
    std::size_t next = j + 1;

    std::optional<std::string> member;
    if (line.substr(next, 2) == "->") {
      std::size_t k = next + 2;
      while (k < line.size() && line[k] != ':' && line[k] != '(' &&
             !std::isspace(static_cast<unsigned char>(line[k]))) {
        ++k;
      }
      member = std::string(line.substr(next + 2, k - next - 2));
      next = k;
    }

    if (member && dotted.ends_with("R$id")) {
      out.push_back({EventKind::LayoutIdRef, line_no, dotted, *member});
    } else {
      out.push_back({EventKind::TypeRef, line_no, dotted, {}});
      if (member) out.push_back({EventKind::MemberRef, line_no, dotted, *member});
      if (new_instance && first_descriptor) {
        out.push_back({EventKind::Instantiation, line_no, dotted, {}});
      }
    }
    first_descriptor = false;
    i = next;
  }
}

// --- java ------------------------------------------------------------------

using ImportMap = std::unordered_map<std::string, std::string>;

void emit_chain(const std::vector<std::string>& raw, bool after_new, const ImportMap& imports,
                std::size_t line_no, std::vector<CodeEvent>& out) {
  const std::size_t n = raw.size();
  if (n >= 3 && raw[n - 3] == "R" && raw[n - 2] == "id") {
    out.push_back({EventKind::LayoutIdRef, line_no, join_dots(raw, 0, n - 1), raw[n - 1]});
    return;
  }
  std::vector<std::string> segs;
  if (auto it = imports.find(raw.front()); it != imports.end()) {
    segs = split_dots(it->second);
    segs.insert(segs.end(), raw.begin() + 1, raw.end());
  } else {
    segs = raw;
  }
  // Java naming: packages are lower case, the first capitalised segment is the
  // class and whatever follows is a member.
  std::size_t cls = segs.size();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (std::isupper(static_cast<unsigned char>(segs[i].front()))) {
      cls = i;
      break;
    }
  }
  if (cls == segs.size()) {
    if (segs.size() >= 2) out.push_back({EventKind::TypeRef, line_no, join_dots(segs, 0, segs.size()), {}});
    return;
  }
  const std::string type = join_dots(segs, 0, cls + 1);
  out.push_back({EventKind::TypeRef, line_no, type, {}});
  if (cls + 1 < segs.size()) out.push_back({EventKind::MemberRef, line_no, type, segs[cls + 1]});
  if (after_new) out.push_back({EventKind::Instantiation, line_no, type, {}});
}

ImportMap collect_imports(std::string_view text) {
  ImportMap imports;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = trim(raw);
    if (!line.starts_with("import ")) continue;
    line.remove_prefix(7);
    line = trim(line);
    if (line.starts_with("static ")) continue;
    if (line.ends_with(";")) line.remove_suffix(1);
    line = trim(line);
    if (line.ends_with(".*")) continue;
    imports.emplace(simple_name(line), std::string(line));
  }
  return imports;
}

void scan_java_line(std::string_view line, std::size_t line_no, const ImportMap& imports,
                    std::vector<CodeEvent>& out) {
  const std::string_view t = trim(line);
  if (t.starts_with("package ")) return;
  const bool import_line = t.starts_with("import ");
  std::string last_word;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') break;
    if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < line.size() && line[j] != c) j += (line[j] == '\\') ? 2 : 1;
      i = j + 1;
      last_word.clear();
      continue;
    }
    if (!is_ident_start(c) || (i > 0 && (is_ident_char(line[i - 1]) || line[i - 1] == '.'))) {
      if (!std::isspace(static_cast<unsigned char>(c))) last_word.clear();
      ++i;
      continue;
    }
    std::vector<std::string> segs;
    std::size_t j = i;
    while (true) {
      std::size_t k = j;
      while (k < line.size() && is_ident_char(line[k])) ++k;
      segs.emplace_back(line.substr(j, k - j));
      if (k + 1 < line.size() && line[k] == '.' && is_ident_start(line[k + 1])) {
        j = k + 1;
      } else {
        j = k;
        break;
      }
    }
    if (segs.size() == 1 && (segs[0] == "new" || segs[0] == "import" || segs[0] == "static")) {
      last_word = segs[0];
    } else {
      // Imports are emitted verbatim; resolution would map them onto themselves.
      emit_chain(segs, last_word == "new", import_line ? ImportMap{} : imports, line_no, out);
      last_word.clear();
    }
    i = j;
  }
}

// --- files -----------------------------------------------------------------

enum class CodeLang { Smali, Java };

std::optional<CodeLang> code_lang(const fs::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".smali") return CodeLang::Smali;
  if (ext == ".java") return CodeLang::Java;
  return std::nullopt;
}

std::vector<CodeEvent> scan_code(std::string_view text, CodeLang lang) {
  std::vector<CodeEvent> events;
  const ImportMap imports = lang == CodeLang::Java ? collect_imports(text) : ImportMap{};
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (trim(line).empty()) continue;
    if (lang == CodeLang::Smali) {
      scan_smali_line(line, line_no, events);
    } else {
      scan_java_line(line, line_no, imports, events);
    }
    ++line_no;
  }
  return events;
}

void require_readable(const fs::path& root) {
  std::error_code ec;
  if (!fs::exists(root, ec)) {
    throw Error(ErrorCode::UnreadableInput, "input path '" + root.string() + "' does not exist");
  }
}

std::vector<fs::path> files_matching(const fs::path& root, auto&& pred) {
  std::vector<fs::path> out;
  std::error_code ec;
  if (fs::is_regular_file(root, ec)) {
    if (pred(root)) out.push_back(root);
    return out;
  }
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    throw Error(ErrorCode::UnreadableInput, "cannot list '" + root.string() + "': " + ec.message());
  }
  for (const auto& entry : it) {
    if (entry.is_regular_file() && pred(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  return out;
}

struct CodeFile {
  fs::path path;
  std::vector<CodeEvent> events;
};

std::vector<CodeFile> scan_tree(const fs::path& root) {
  require_readable(root);
  const auto paths = files_matching(root, [](const fs::path& p) { return code_lang(p).has_value(); });
  if (paths.empty()) {
    throw Error(ErrorCode::UnreadableInput, "no .smali or .java files under '" + root.string() + "'");
  }
  std::vector<CodeFile> files;
  for (const auto& p : paths) {
    const std::string text = io::read_file(p, ErrorCode::UnreadableInput);
    files.push_back({p, scan_code(text, *code_lang(p))});
  }
  return files;
}

// --- layouts ---------------------------------------------------------------

struct LayoutElement {
  const AdNetwork* network = nullptr;  // null: not an ad view
  AdFormat format = AdFormat::Banner;
  bool defaulted = false;
  std::string source;
};

using LayoutIndex = std::map<std::string, LayoutElement, std::less<>>;

bool in_layout_dir(const fs::path& p) {
  return p.extension() == ".xml" && p.parent_path().filename().string().starts_with("layout");
}

std::optional<std::string> id_name(std::string_view value) {
  for (std::string_view prefix : {"@+id/", "@id/"}) {
    if (value.starts_with(prefix)) return std::string(value.substr(prefix.size()));
  }
  return std::nullopt;
}

const AdNetwork* element_network(const std::string& tag,
                                 const std::vector<std::pair<std::string, std::string>>& attrs,
                                 const AdNetworkCatalog& catalog) {
  for (const auto& net : catalog.networks()) {
    for (const auto& marker : net.layout_markers) {
      if (marker == tag) return &net;
      for (const auto& [name, value] : attrs) {
        if (name == marker) return &net;
      }
    }
  }
  return catalog.owner_of_type(tag);
}

void index_element(const std::string& tag, const pt::ptree& node, const std::string& source,
                   const AdNetworkCatalog& catalog, LayoutIndex& index) {
  std::vector<std::pair<std::string, std::string>> attrs;
  if (auto a = node.get_child_optional("<xmlattr>")) {
    for (const auto& [name, v] : *a) attrs.emplace_back(name, v.data());
  }
  std::optional<std::string> id;
  for (const auto& [name, value] : attrs) {
    if (name == "android:id") id = id_name(value);
  }
  if (id && !index.contains(*id)) {
    LayoutElement el;
    el.source = source;
    el.network = element_network(tag, attrs, catalog);
    if (el.network != nullptr) {
      el.defaulted = true;
      for (const auto& [name, value] : attrs) {
        if (auto it = el.network->format_constants.find(value);
            it != el.network->format_constants.end()) {
          el.format = it->second;
          el.defaulted = false;
          break;
        }
      }
      if (el.defaulted) {
        if (auto it = el.network->format_constants.find(simple_name(tag));
            it != el.network->format_constants.end()) {
          el.format = it->second;
          el.defaulted = false;
        }
      }
    }
    index.emplace(*id, std::move(el));
  }
  for (const auto& [child_tag, child] : node) {
    if (child_tag.starts_with("<xml")) continue;
    index_element(child_tag, child, source, catalog, index);
  }
}

LayoutIndex build_layout_index(const fs::path& root, const AdNetworkCatalog& catalog,
                               std::vector<std::string>& warnings) {
  LayoutIndex index;
  for (const auto& p : files_matching(root, in_layout_dir)) {
    pt::ptree tree;
    try {
      pt::read_xml(p.string(), tree);
    } catch (const pt::xml_parser_error& e) {
      warnings.push_back("skipped unparsable layout '" + p.generic_string() + "': " + e.message());
      continue;
    }
    for (const auto& [tag, node] : tree) {
      if (tag.starts_with("<xml")) continue;
      index_element(tag, node, p.generic_string(), catalog, index);
    }
  }
  return index;
}

const AdNetwork* network_near(const std::vector<CodeEvent>& events, std::size_t line,
                              const AdNetworkCatalog& catalog) {
  for (const auto& ev : events) {
    if (ev.kind == EventKind::LayoutIdRef) continue;
    if (ev.line < line || ev.line > line + kIdTypeWindow) continue;
    if (const AdNetwork* net = catalog.owner_of_type(ev.type)) return net;
  }
  return nullptr;
}

}  // namespace

std::set<std::string> detect_networks(const AppPackageInput& input, const AdNetworkCatalog& catalog) {
  std::set<std::string> found;
  if (input.kind == InputKind::RawDex) {
    require_readable(input.root);
    const auto dex_files =
        files_matching(input.root, [](const fs::path& p) { return p.extension() == ".dex"; });
    if (dex_files.empty()) {
      throw Error(ErrorCode::UnreadableInput, "no .dex files under '" + input.root.string() + "'");
    }
    for (const auto& file : dex_files) {
      for (const auto& descriptor : dex::read_type_descriptors(file)) {
        if (const AdNetwork* net = catalog.owner_of_type(dex::descriptor_to_dotted(descriptor))) {
          found.insert(net->name);
        }
      }
    }
    return found;
  }
  for (const auto& file : scan_tree(input.root)) {
    for (const auto& ev : file.events) {
      if (ev.kind == EventKind::LayoutIdRef) continue;
      if (const AdNetwork* net = catalog.owner_of_type(ev.type)) found.insert(net->name);
    }
  }
  return found;
}

AdIntegrationScheme extract_ad_formats(const AppPackageInput& input, const AdNetworkCatalog& catalog) {
  if (input.kind == InputKind::RawDex) {
    throw Error(ErrorCode::UnsupportedInputKind,
                "ad formats need a decompiled tree; '" + input.root.string() + "' is raw DEX");
  }
  AdIntegrationScheme scheme;
  const auto files = scan_tree(input.root);
  const LayoutIndex layouts = build_layout_index(input.root, catalog, scheme.warnings);
  std::set<std::string, std::less<>> seen_ids;

  for (const auto& file : files) {
    for (const auto& ev : file.events) {
      switch (ev.kind) {
        case EventKind::TypeRef:
          break;
        case EventKind::MemberRef: {
          const AdNetwork* net = catalog.owner_of_type(ev.type);
          if (net == nullptr) break;
          if (auto it = net->format_constants.find(ev.name); it != net->format_constants.end()) {
            scheme.placements.push_back({net->name, it->second});
          }
          break;
        }
        case EventKind::Instantiation: {
          const AdNetwork* net = catalog.owner_of_type(ev.type);
          if (net == nullptr) break;
          if (auto it = net->format_constants.find(simple_name(ev.type));
              it != net->format_constants.end()) {
            scheme.placements.push_back({net->name, it->second});
          }
          break;
        }
        case EventKind::LayoutIdRef: {
          if (seen_ids.contains(ev.name)) break;
          const AdNetwork* near = network_near(file.events, ev.line, catalog);
          if (near == nullptr) break;
          seen_ids.insert(ev.name);
          const auto it = layouts.find(ev.name);
          if (it == layouts.end()) {
            scheme.placements.push_back({near->name, AdFormat::Banner});
            scheme.warnings.push_back("DanglingLayoutId: '" + ev.name + "' referenced in " +
                                      file.path.generic_string() +
                                      " is not declared in any layout; recorded as Banner");
            break;
          }
          const LayoutElement& el = it->second;
          if (el.network == nullptr) break;
          scheme.placements.push_back({el.network->name, el.format});
          if (el.defaulted) {
            scheme.warnings.push_back("layout element '" + ev.name + "' in " + el.source +
                                      " has no recognised format; recorded as Banner");
          }
          break;
        }
      }
    }
  }
  return scheme;
}

std::string scheme_report_json(const std::string& app_id, const AdIntegrationScheme& scheme) {
  nlohmann::ordered_json placements = nlohmann::ordered_json::array();
  for (const auto& p : scheme.placements) {
    placements.push_back({{"network", p.network}, {"format", std::string(to_string(p.format))}});
  }
  nlohmann::ordered_json doc;
  doc["app_id"] = app_id;
  doc["placements"] = std::move(placements);
  doc["ad_count"] = scheme.ad_count();
  doc["warnings"] = scheme.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace intelliad
