#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "intelliad/trace.hpp"

namespace intelliad::simdevice {

/// Target per-session means. Thread count and frequency are written as
/// integers, spread so that their means hit the plant whenever
/// plant * sample_count is integral.
struct MetricPlants {
  double rss_kb = 40000.0;
  double cpu_pct = 2.0;
  double thread_count = 20.0;
  double packet_rate_pps = 5.0;
  double bytes_per_packet = 600.0;
  double cpu_freq_khz = 1000000.0;
};

/// Relative standard deviations (0.05 = 5 %). Zero disables noise.
struct NoiseSpec {
  double rss_kb = 0.0;
  double cpu_pct = 0.0;
  double thread_count = 0.0;
  double bytes_per_packet = 0.0;
  double cpu_freq_khz = 0.0;

  static NoiseSpec uniform(double sd) { return {sd, sd, sd, sd, sd}; }
};

enum class Arrivals { FixedRate, Poisson };

struct SessionPlan {
  std::string label = "session";
  double duration_s = 80.0;
  double op_interval_s = 20.0;
  double top_interval_s = 1.0;
  double proc_interval_s = 0.04;
  MetricPlants plants;
  NoiseSpec noise;
  Arrivals arrivals = Arrivals::FixedRate;
  std::uint64_t seed = 1;
  std::int64_t pid = 4242;

  /// Throws InvalidPlan.
  void validate() const;
};

/// Plants multiplied fieldwise by `factors`.
MetricPlants scale_plants(const MetricPlants& plants, const MetricPlants& factors);

struct GeneratedSession {
  trace::MeasurementSession session;
  // Means of the values actually emitted (power_mw stays 0).
  trace::CostVector realized;
};

/// Samples at t = i * interval for i in [0, round(duration / interval)).
/// Fixed-rate packets sit at (i + 0.5 + jitter) / rate with jitter in
/// [-0.25, 0.25]; Poisson mode draws exponential gaps instead.
GeneratedSession generate_session(const SessionPlan& plan);

/// Writes top.log, packet.log, proc.log, manifest.json and ground_truth.json
/// into `dir`. Returns the manifest path.
std::filesystem::path write_session(const std::filesystem::path& dir, const SessionPlan& plan,
                                    const GeneratedSession& generated);

}  // namespace intelliad::simdevice
