#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "intelliad/error.hpp"
#include "intelliad/pipeline.hpp"

namespace {

using intelliad::pipeline::StageResult;
using intelliad::pipeline::WorkspaceConfig;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k;
  std::optional<int> rating_cutoff;
  std::optional<std::size_t> runs;
  std::optional<intelliad::pipeline::Granularity> granularity;
};

WorkspaceConfig resolve_config(const Overrides& o) {
  std::string path = o.config;
  if (path.empty()) {
    if (const char* env = std::getenv("INTELLIAD_CONFIG")) path = env;
  }
  if (path.empty()) {
    throw intelliad::Error(intelliad::ErrorCode::InvalidConfig,
                           "no config given (use --config or INTELLIAD_CONFIG)");
  }
  WorkspaceConfig c = intelliad::pipeline::load_config(path);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.k) c.k = *o.k;
  if (o.rating_cutoff) c.rating_cutoff = *o.rating_cutoff;
  if (o.runs) c.runs_expected = *o.runs;
  if (o.granularity) c.granularity = *o.granularity;
  return c;
}

int report(const std::string& stage, const StageResult& r) {
  for (const auto& w : r.warnings) std::cerr << stage << ": warning: " << w << "\n";
  for (const auto& e : r.errors) std::cerr << stage << ": error: " << e << "\n";
  std::cout << stage << ": " << r.written.size() << " file(s) written, " << r.warnings.size()
            << " warning(s), " << r.errors.size() << " error(s)\n";
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure the cost of in-app ads: inspect ad integrations, profile traces, "
               "mine reviews and correlate the results."};
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config, "Workspace config (falls back to INTELLIAD_CONFIG)");
  app.add_option("--out", o.out, "Output directory (overrides the config)");
  app.add_option("--seed", o.seed, "Seed for k-means and the simulator");
  app.add_option("--k", o.k, "Number of phrase clusters")->check(CLI::PositiveNumber);
  app.add_option("--rating-cutoff", o.rating_cutoff, "Reviews rated below this are classified")
      ->check(CLI::Range(1, 6));
  app.add_option("--runs", o.runs, "Expected runs per scheme")->check(CLI::PositiveNumber);
  const std::map<std::string, intelliad::pipeline::Granularity> granularities{
      {"scheme", intelliad::pipeline::Granularity::Scheme},
      {"app", intelliad::pipeline::Granularity::App}};
  app.add_option("--granularity", o.granularity, "Correlation unit: scheme or app")
      ->transform(CLI::CheckedTransformer(granularities));

  using Stage = StageResult (*)(const WorkspaceConfig&);
  const std::pair<const char*, Stage> stages[] = {
      {"inspect", intelliad::pipeline::run_inspect},
      {"simulate", intelliad::pipeline::run_simulate},
      {"profile", intelliad::pipeline::run_profile},
      {"reviews", intelliad::pipeline::run_reviews},
      {"correlate", intelliad::pipeline::run_correlate},
      {"report", intelliad::pipeline::run_report},
  };
  const char* help[] = {
      "Detect ad networks and formats in each configured app",
      "Generate synthetic measurement sessions with known ground truth",
      "Compute per-scheme cost vectors, deltas and increase rates",
      "Filter, cluster and classify reviews; aggregate ratings",
      "Correlate measured costs with review ratings per scheme",
      "Write the long-format report, standard deviations and summary",
  };
  std::string chosen;
  for (std::size_t i = 0; i < std::size(stages); ++i) {
    app.add_subcommand(stages[i].first, help[i])->fallthrough()->callback([&, i] { chosen = stages[i].first; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const WorkspaceConfig config = resolve_config(o);
    for (const auto& [name, fn] : stages) {
      if (chosen == name) return report(name, fn(config));
    }
  } catch (const std::exception& e) {
    std::cerr << "intelliad: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
