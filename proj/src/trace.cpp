#include "intelliad/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "json.hpp"

#include "intelliad/error.hpp"
#include "intelliad/io.hpp"
#include "intelliad/simd/kernels.hpp"

namespace intelliad::trace {
namespace {

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": " + why, line_no);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <std::size_t N>
std::array<std::string_view, N> split_fields(std::string_view line, std::size_t line_no) {
  std::array<std::string_view, N> out{};
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (count == N) bad_line(line_no, "expected " + std::to_string(N) + " fields");
    out[count++] = trim(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (count != N) bad_line(line_no, "expected " + std::to_string(N) + " fields");
  return out;
}

double parse_double(std::string_view field, std::size_t line_no, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
    bad_line(line_no, std::string("bad ") + what + " '" + std::string(field) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view field, std::size_t line_no, const char* what) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    bad_line(line_no, std::string("bad ") + what + " '" + std::string(field) + "'");
  }
  return v;
}

// Calls fn(line, line_no) for each content line and enforces nondecreasing t.
template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  double last_t = 0.0;
  bool have_last = false;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::optional<double> t = fn(line, line_no);
    if (!t) continue;
    if (*t < 0.0) bad_line(line_no, "negative timestamp");
    if (have_last && *t < last_t) {
      throw Error(ErrorCode::NonMonotonicTimestamp,
                  "line " + std::to_string(line_no) + ": timestamp goes backwards", line_no);
    }
    last_t = *t;
    have_last = true;
  }
}

template <typename Sample>
void check_within(const std::vector<Sample>& samples, double duration, const std::string& log) {
  for (const auto& s : samples) {
    if (s.t > duration) {
      throw Error(ErrorCode::SampleBeyondDuration,
                  log + ": sample at t=" + format_number(s.t) + " exceeds duration_s");
    }
  }
}

double mean_of(std::vector<double>& values) { return simd::mean(values); }

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<TopSample> parse_top_log(std::string_view text, std::optional<std::int64_t> pid_filter) {
  std::vector<TopSample> out;
  for_each_record(text, [&](std::string_view line, std::size_t n) -> std::optional<double> {
    const auto f = split_fields<4>(line, n);
    TopSample s;
    s.t = parse_double(f[0], n, "t_s");
    s.pid = parse_int<std::int64_t>(f[1], n, "pid");
    s.rss_kb = parse_double(f[2], n, "rss_kb");
    s.cpu_pct = parse_double(f[3], n, "cpu_pct");
    if (s.rss_kb < 0.0) bad_line(n, "rss_kb must be >= 0");
    if (s.cpu_pct < 0.0 || s.cpu_pct > 100.0) bad_line(n, "cpu_pct must lie in [0, 100]");
    if (pid_filter && s.pid != *pid_filter) return std::nullopt;
    out.push_back(s);
    return s.t;
  });
  return out;
}

std::vector<PacketRecord> parse_packet_log(std::string_view text) {
  std::vector<PacketRecord> out;
  for_each_record(text, [&](std::string_view line, std::size_t n) -> std::optional<double> {
    const auto f = split_fields<3>(line, n);
    PacketRecord p;
    p.t = parse_double(f[0], n, "t_s");
    if (f[1] == "in") {
      p.direction = Direction::In;
    } else if (f[1] == "out") {
      p.direction = Direction::Out;
    } else {
      bad_line(n, "direction must be 'in' or 'out'");
    }
    p.bytes = parse_int<std::uint64_t>(f[2], n, "bytes");
    if (p.bytes == 0) bad_line(n, "bytes must be positive");
    out.push_back(p);
    return p.t;
  });
  return out;
}

std::vector<ProcSample> parse_proc_log(std::string_view text) {
  std::vector<ProcSample> out;
  for_each_record(text, [&](std::string_view line, std::size_t n) -> std::optional<double> {
    const auto f = split_fields<3>(line, n);
    ProcSample s;
    s.t = parse_double(f[0], n, "t_s");
    s.thread_count = parse_int<std::uint32_t>(f[1], n, "thread_count");
    s.cpu_freq_khz = parse_int<std::uint64_t>(f[2], n, "cpu_freq_khz");
    if (s.thread_count < 1) bad_line(n, "thread_count must be >= 1");
    if (s.cpu_freq_khz == 0) bad_line(n, "cpu_freq_khz must be positive");
    out.push_back(s);
    return s.t;
  });
  return out;
}

std::string to_csv(std::span<const TopSample> samples) {
  std::string out;
  for (const auto& s : samples) {
    out += format_number(s.t) + ',' + std::to_string(s.pid) + ',' + format_number(s.rss_kb) + ',' +
           format_number(s.cpu_pct) + '\n';
  }
  return out;
}

std::string to_csv(std::span<const PacketRecord> packets) {
  std::string out;
  for (const auto& p : packets) {
    out += format_number(p.t) + (p.direction == Direction::In ? ",in," : ",out,") +
           std::to_string(p.bytes) + '\n';
  }
  return out;
}

std::string to_csv(std::span<const ProcSample> samples) {
  std::string out;
  for (const auto& s : samples) {
    out += format_number(s.t) + ',' + std::to_string(s.thread_count) + ',' +
           std::to_string(s.cpu_freq_khz) + '\n';
  }
  return out;
}

MeasurementSession load_session(const std::filesystem::path& manifest) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(io::read_file(manifest, ErrorCode::MalformedManifest));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedManifest, manifest.string() + ": " + e.what());
  }
  auto text_field = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_string()) {
      throw Error(ErrorCode::MalformedManifest,
                  manifest.string() + ": missing string field '" + key + "'");
    }
    return doc[key].get<std::string>();
  };
  if (!doc.is_object() || !doc.contains("duration_s") || !doc["duration_s"].is_number()) {
    throw Error(ErrorCode::MalformedManifest, manifest.string() + ": missing duration_s");
  }
  MeasurementSession s;
  s.label = text_field("label");
  s.duration_s = doc["duration_s"].get<double>();
  std::optional<std::int64_t> pid;
  if (doc.contains("pid") && doc["pid"].is_number_integer()) pid = doc["pid"].get<std::int64_t>();

  const auto base = manifest.parent_path();
  const auto top_path = io::resolve(base, text_field("top_log"));
  const auto packet_path = io::resolve(base, text_field("packet_log"));
  const auto proc_path = io::resolve(base, text_field("proc_log"));
  s.top_samples = parse_top_log(io::read_file(top_path), pid);
  s.packets = parse_packet_log(io::read_file(packet_path));
  s.proc_samples = parse_proc_log(io::read_file(proc_path));
  check_within(s.top_samples, s.duration_s, top_path.string());
  check_within(s.packets, s.duration_s, packet_path.string());
  check_within(s.proc_samples, s.duration_s, proc_path.string());
  return s;
}

std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::MemRss: return "mem_rss_avg_kb";
    case Metric::CpuUtil: return "cpu_util_avg_pct";
    case Metric::ThreadCount: return "thread_count_avg";
    case Metric::TotalBytes: return "total_bytes";
    case Metric::PacketCount: return "packet_count";
    case Metric::PacketRate: return "avg_packet_rate_pps";
    case Metric::CpuFreq: return "avg_cpu_freq_khz";
    case Metric::Power: return "power_mw";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

double& CostVector::operator[](Metric m) noexcept {
  switch (m) {
    case Metric::MemRss: return mem_rss_avg_kb;
    case Metric::CpuUtil: return cpu_util_avg_pct;
    case Metric::ThreadCount: return thread_count_avg;
    case Metric::TotalBytes: return total_bytes;
    case Metric::PacketCount: return packet_count;
    case Metric::PacketRate: return avg_packet_rate_pps;
    case Metric::CpuFreq: return avg_cpu_freq_khz;
    case Metric::Power: break;
  }
  return power_mw;
}

double CostVector::operator[](Metric m) const noexcept {
  return const_cast<CostVector&>(*this)[m];
}

SessionCosts compute_cost_vector(const MeasurementSession& session) {
  if (!(session.duration_s > 0.0)) {
    throw Error(ErrorCode::ZeroDuration, "session '" + session.label + "' has no duration");
  }
  if (session.top_samples.empty() && session.packets.empty() && session.proc_samples.empty()) {
    throw Error(ErrorCode::EmptySession, "session '" + session.label + "' has no samples");
  }
  SessionCosts out;
  CostVector& c = out.cost;

  std::vector<double> buf;
  if (session.top_samples.empty()) {
    out.warnings.push_back("no top samples; mem_rss_avg_kb and cpu_util_avg_pct set to 0");
  } else {
    buf.clear();
    for (const auto& s : session.top_samples) buf.push_back(s.rss_kb);
    c.mem_rss_avg_kb = mean_of(buf);
    buf.clear();
    for (const auto& s : session.top_samples) buf.push_back(s.cpu_pct);
    c.cpu_util_avg_pct = mean_of(buf);
  }

  if (session.proc_samples.empty()) {
    out.warnings.push_back("no proc samples; thread_count_avg and avg_cpu_freq_khz set to 0");
  } else {
    buf.clear();
    for (const auto& s : session.proc_samples) buf.push_back(s.thread_count);
    c.thread_count_avg = mean_of(buf);
    buf.clear();
    for (const auto& s : session.proc_samples) buf.push_back(static_cast<double>(s.cpu_freq_khz));
    c.avg_cpu_freq_khz = mean_of(buf);
  }

  if (session.packets.empty()) out.warnings.push_back("no packets captured");
  std::uint64_t bytes = 0;
  for (const auto& p : session.packets) bytes += p.bytes;
  c.total_bytes = static_cast<double>(bytes);
  c.packet_count = static_cast<double>(session.packets.size());
  c.avg_packet_rate_pps = c.packet_count / session.duration_s;
  c.power_mw = 0.0;
  return out;
}

CostVector estimate_power(const CostVector& cost, const power::PowerModel& model) {
  CostVector out = cost;
  out.power_mw = power::total_power(cost.avg_packet_rate_pps, cost.cpu_util_avg_pct / 100.0,
                                    cost.avg_cpu_freq_khz, model);
  return out;
}

CostSeparation separate_costs(const CostVector& ad_app, const CostVector& prototype) {
  CostSeparation out;
  for (Metric m : kAllMetrics) {
    out.delta[m] = ad_app[m] - prototype[m];
    if (prototype[m] != 0.0) {
      out.increase_rate[static_cast<std::size_t>(m)] = out.delta[m] / prototype[m];
    }
  }
  return out;
}

RunAggregate aggregate_runs(std::span<const CostVector> runs, std::size_t n_expected) {
  if (runs.empty()) throw Error(ErrorCode::EmptyRunList, "no runs to aggregate");
  RunAggregate out;
  if (runs.size() != n_expected) {
    out.warnings.push_back("expected " + std::to_string(n_expected) + " runs, got " +
                           std::to_string(runs.size()));
  }
  std::vector<double> column(runs.size());
  for (Metric m : kAllMetrics) {
    for (std::size_t i = 0; i < runs.size(); ++i) column[i] = runs[i][m];
    std::sort(column.begin(), column.end());
    out.mean[m] = simd::mean(column);
  }
  return out;
}

}  // namespace intelliad::trace
