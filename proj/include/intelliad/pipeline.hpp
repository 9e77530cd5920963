#pragma once

// Workspace stages behind the command-line tool. Each stage reads its inputs
// from the workspace config and from earlier stages' output files, and writes
// its own directory under the output dir:
//
//   inspect   -> inspect/<app>.json, schemes.csv, summary.json
//   simulate  -> simulate/<group>/run<i>/..., simulate/index.json
//   profile   -> profile/costs.csv, deltas.csv, increase_rates.csv, summary.json
//   reviews   -> reviews/phrases.csv, clusters.csv, ratings.csv, summary.json
//   correlate -> correlate/observations.csv, correlations.csv, summary.json
//   report    -> report/long.csv, stdev.csv, summary.json

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "intelliad/analytics.hpp"
#include "intelliad/inspector.hpp"
#include "intelliad/simdevice.hpp"

namespace intelliad::pipeline {

struct AppEntry {
  std::string id;
  AppPackageInput input;
  std::string scheme;
};

/// Session manifests grouped into the ad-free prototype and per-scheme runs.
struct TraceIndex {
  std::vector<std::filesystem::path> baseline;
  std::map<std::string, std::vector<std::filesystem::path>> schemes;
};

/// JSON {"baseline":[..], "schemes":{"A1":[..]}}; paths relative to the file.
TraceIndex load_trace_index(const std::filesystem::path& path);

struct SimulateSpec {
  simdevice::MetricPlants prototype;
  // Per-scheme multiplicative lifts over the prototype plants.
  std::map<std::string, simdevice::MetricPlants> lifts;
  std::size_t runs = 4;
  double noise = 0.0;
  double duration_s = 80.0;
};

/// Unit of the cost/rating correlation: one point per scheme, or one per app
/// (its scheme's measured costs against its own ratings).
enum class Granularity { Scheme, App };

struct WorkspaceConfig {
  std::filesystem::path root;  // directory holding the config file
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> catalog;
  std::optional<std::filesystem::path> power_model;
  std::optional<std::filesystem::path> keywords;
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> reviews;
  std::optional<std::filesystem::path> word_vectors;
  std::optional<TraceIndex> traces;
  std::optional<SimulateSpec> simulate;
  std::vector<AppEntry> apps;
  // App id -> scheme id for review aggregation; app entries add to it.
  std::map<std::string, std::string> scheme_of_app;
  analytics::DataPlan data_plan = analytics::DataPlan::gigabytes(25.0, 5.0);
  std::size_t embedding_dim = 16;
  std::size_t k = 4;
  int rating_cutoff = 3;
  std::size_t runs_expected = 4;
  std::uint64_t seed = 42;
  Granularity granularity = Granularity::Scheme;
};

/// Parses a workspace config; relative paths resolve against its directory.
/// Throws InvalidConfig.
WorkspaceConfig load_config(const std::filesystem::path& path);

struct StageResult {
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
  std::vector<std::filesystem::path> written;

  bool ok() const noexcept { return errors.empty(); }
};

StageResult run_inspect(const WorkspaceConfig& config);
StageResult run_simulate(const WorkspaceConfig& config);
StageResult run_profile(const WorkspaceConfig& config);
StageResult run_reviews(const WorkspaceConfig& config);
StageResult run_correlate(const WorkspaceConfig& config);
StageResult run_report(const WorkspaceConfig& config);

/// Seed for one simulated session, mixed from the workspace seed.
std::uint64_t session_seed(std::uint64_t base, std::uint64_t group, std::uint64_t run) noexcept;

}  // namespace intelliad::pipeline
