#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intelliad/power.hpp"

namespace intelliad::trace {

// Canonical logs are headerless CSV. Blank lines and lines starting with '#'
// are skipped; line numbers in errors count every physical line from 1.
//
//   top    : t_s,pid,rss_kb,cpu_pct
//   packet : t_s,direction(in|out),bytes
//   proc   : t_s,thread_count,cpu_freq_khz

struct TopSample {
  double t = 0.0;
  std::int64_t pid = 0;
  double rss_kb = 0.0;
  double cpu_pct = 0.0;
  friend bool operator==(const TopSample&, const TopSample&) = default;
};

enum class Direction { In, Out };

struct PacketRecord {
  double t = 0.0;
  Direction direction = Direction::In;
  std::uint64_t bytes = 0;
  friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

struct ProcSample {
  double t = 0.0;
  std::uint32_t thread_count = 1;
  std::uint64_t cpu_freq_khz = 0;
  friend bool operator==(const ProcSample&, const ProcSample&) = default;
};

/// Lines whose pid differs from `pid_filter` are dropped when it is set.
std::vector<TopSample> parse_top_log(std::string_view text,
                                     std::optional<std::int64_t> pid_filter = std::nullopt);
std::vector<PacketRecord> parse_packet_log(std::string_view text);
std::vector<ProcSample> parse_proc_log(std::string_view text);

std::string to_csv(std::span<const TopSample> samples);
std::string to_csv(std::span<const PacketRecord> packets);
std::string to_csv(std::span<const ProcSample> samples);

/// Shortest text that parses back to the same double.
std::string format_number(double v);

struct MeasurementSession {
  std::string label;
  double duration_s = 0.0;
  std::vector<TopSample> top_samples;
  std::vector<PacketRecord> packets;
  std::vector<ProcSample> proc_samples;
};

/// Manifest: {"label":..,"duration_s":..,"top_log":..,"packet_log":..,
/// "proc_log":..,"pid":(optional)}. Log paths resolve against the manifest's
/// directory. Samples stamped after duration_s raise SampleBeyondDuration.
MeasurementSession load_session(const std::filesystem::path& manifest);

enum class Metric {
  MemRss,
  CpuUtil,
  ThreadCount,
  TotalBytes,
  PacketCount,
  PacketRate,
  CpuFreq,
  Power,
};
inline constexpr std::size_t kMetricCount = 8;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics{
    Metric::MemRss,      Metric::CpuUtil,    Metric::ThreadCount, Metric::TotalBytes,
    Metric::PacketCount, Metric::PacketRate, Metric::CpuFreq,     Metric::Power,
};

/// Column name used in every report ("mem_rss_avg_kb", ...).
std::string_view metric_name(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;

/// Per-session (or aggregated) cost metrics. Deltas reuse this shape and may
/// be negative.
struct CostVector {
  double mem_rss_avg_kb = 0.0;
  double cpu_util_avg_pct = 0.0;
  double thread_count_avg = 0.0;
  double total_bytes = 0.0;
  double packet_count = 0.0;
  double avg_packet_rate_pps = 0.0;
  double avg_cpu_freq_khz = 0.0;
  double power_mw = 0.0;

  double& operator[](Metric m) noexcept;
  double operator[](Metric m) const noexcept;
  friend bool operator==(const CostVector&, const CostVector&) = default;
};

struct SessionCosts {
  CostVector cost;
  // One entry per empty sample list whose fields were zero-filled.
  std::vector<std::string> warnings;
};

/// Means over each sample list, byte/packet totals, and packets per second
/// over the session duration. power_mw stays 0 until estimate_power.
/// Throws ZeroDuration or EmptySession.
SessionCosts compute_cost_vector(const MeasurementSession& session);

/// Sets power_mw from the packet rate, utilization (cpu_pct / 100) and the
/// nearest frequency bin.
CostVector estimate_power(const CostVector& cost, const power::PowerModel& model);

struct CostSeparation {
  CostVector delta;
  // delta / prototype; empty where the prototype metric is exactly zero.
  std::array<std::optional<double>, kMetricCount> increase_rate;

  const std::optional<double>& rate(Metric m) const noexcept {
    return increase_rate[static_cast<std::size_t>(m)];
  }
};

/// Ad-attributable cost: ad app minus the ad-free prototype, signed.
CostSeparation separate_costs(const CostVector& ad_app, const CostVector& prototype);

struct RunAggregate {
  CostVector mean;
  std::vector<std::string> warnings;
};

/// Fieldwise mean. Each field is summed in sorted order, so the result does
/// not depend on run order. Warns when the run count differs from
/// `n_expected`. Throws EmptyRunList.
RunAggregate aggregate_runs(std::span<const CostVector> runs, std::size_t n_expected = 4);

}  // namespace intelliad::trace
