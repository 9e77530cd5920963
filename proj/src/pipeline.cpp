#include "intelliad/pipeline.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "intelliad/embedding.hpp"
#include "intelliad/error.hpp"
#include "intelliad/io.hpp"
#include "intelliad/power.hpp"
#include "intelliad/reviews.hpp"
#include "intelliad/trace.hpp"

namespace intelliad::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;
using reviews::CostType;
using trace::Metric;

namespace {

constexpr int kCsvDecimals = 6;
constexpr int kJsonDecimals = 9;

[[noreturn]] void bad_config(const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); }

std::string fixed(double v) { return analytics::format_fixed(v, kCsvDecimals); }
double stored(double v) { return analytics::round_half_even(v, kJsonDecimals); }

// Object member by reference, or an empty object when absent.
const json& member(const json& doc, const char* key) {
  static const json empty = json::object();
  const auto it = doc.find(key);
  return it == doc.end() ? empty : *it;
}

json parse_json_file(const fs::path& path, ErrorCode code) {
  try {
    return json::parse(io::read_file(path, code));
  } catch (const json::parse_error& e) {
    throw Error(code, path.string() + ": " + e.what());
  }
}

std::string write_json(const fs::path& path, const ojson& doc, StageResult& result) {
  io::write_file_atomic(path, doc.dump(2) + "\n");
  result.written.push_back(path);
  return path.string();
}

void write_text(const fs::path& path, const std::string& text, StageResult& result) {
  io::write_file_atomic(path, text);
  result.written.push_back(path);
}

std::optional<fs::path> optional_path(const json& doc, const char* key, const fs::path& root) {
  if (!doc.contains(key)) return std::nullopt;
  if (!doc[key].is_string()) bad_config(std::string("'") + key + "' must be a path string");
  fs::path p = io::resolve(root, doc[key].get<std::string>());
  if (!fs::exists(p)) bad_config(std::string("'") + key + "' refers to missing file " + p.string());
  return p;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj[key].get<T>();
  } catch (const json::exception&) {
    bad_config(std::string("'") + key + "' has the wrong type");
  }
}

TraceIndex parse_trace_index(const json& doc, const fs::path& base, ErrorCode code) {
  if (!doc.is_object()) throw Error(code, "trace index must be an object");
  auto paths = [&](const json& list, const std::string& what) {
    if (!list.is_array()) throw Error(code, what + " must be a list of manifest paths");
    std::vector<fs::path> out;
    for (const auto& p : list) {
      if (!p.is_string()) throw Error(code, what + " entries must be strings");
      out.push_back(io::resolve(base, p.get<std::string>()));
    }
    return out;
  };
  TraceIndex index;
  if (!doc.contains("baseline")) throw Error(code, "trace index lacks 'baseline'");
  index.baseline = paths(doc["baseline"], "baseline");
  if (doc.contains("schemes")) {
    if (!doc["schemes"].is_object()) throw Error(code, "'schemes' must be an object");
    for (const auto& [scheme, list] : doc["schemes"].items()) {
      index.schemes[scheme] = paths(list, "scheme " + scheme);
    }
  }
  return index;
}

simdevice::MetricPlants parse_plants(const json& doc, simdevice::MetricPlants base) {
  if (!doc.is_object()) bad_config("plants must be objects");
  base.rss_kb = get_or(doc, "rss_kb", base.rss_kb);
  base.cpu_pct = get_or(doc, "cpu_pct", base.cpu_pct);
  base.thread_count = get_or(doc, "thread_count", base.thread_count);
  base.packet_rate_pps = get_or(doc, "packet_rate_pps", base.packet_rate_pps);
  base.bytes_per_packet = get_or(doc, "bytes_per_packet", base.bytes_per_packet);
  base.cpu_freq_khz = get_or(doc, "cpu_freq_khz", base.cpu_freq_khz);
  return base;
}

ojson cost_json(const trace::CostVector& c) {
  ojson out;
  for (Metric m : trace::kAllMetrics) out[std::string(trace::metric_name(m))] = stored(c[m]);
  return out;
}

std::string metric_header(const std::string& first) {
  std::vector<std::string> fields{first};
  for (Metric m : trace::kAllMetrics) fields.emplace_back(trace::metric_name(m));
  return analytics::csv_line(fields);
}

json read_stage_summary(const WorkspaceConfig& config, const char* stage) {
  const fs::path path = config.output_dir / stage / "summary.json";
  if (!fs::exists(path)) {
    throw Error(ErrorCode::IoError,
                path.string() + " not found; run the '" + stage + "' stage first");
  }
  return parse_json_file(path, ErrorCode::IoError);
}

std::string placements_text(const AdIntegrationScheme& scheme) {
  std::string out;
  for (const auto& p : scheme.placements) {
    if (!out.empty()) out += ';';
    out += p.network + ":" + std::string(to_string(p.format));
  }
  return out;
}

template <typename Fn>
StageResult guarded(Fn&& body) {
  StageResult result;
  try {
    body(result);
  } catch (const std::exception& e) {
    result.errors.emplace_back(e.what());
  }
  return result;
}

}  // namespace

std::uint64_t session_seed(std::uint64_t base, std::uint64_t group, std::uint64_t run) noexcept {
  // splitmix64 finalizer over a per-session offset.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (group * 1000 + run + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TraceIndex load_trace_index(const fs::path& path) {
  return parse_trace_index(parse_json_file(path, ErrorCode::MalformedManifest), path.parent_path(),
                           ErrorCode::MalformedManifest);
}

WorkspaceConfig load_config(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(io::read_file(path, ErrorCode::InvalidConfig));
  } catch (const json::parse_error& e) {
    bad_config(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) bad_config("config must be a JSON object");

  WorkspaceConfig c;
  c.root = fs::absolute(path).parent_path();
  c.output_dir = io::resolve(c.root, get_or<std::string>(doc, "output_dir", "out"));
  c.catalog = optional_path(doc, "catalog", c.root);
  c.power_model = optional_path(doc, "power_model", c.root);
  c.keywords = optional_path(doc, "keywords", c.root);
  c.stopwords = optional_path(doc, "stopwords", c.root);
  c.reviews = optional_path(doc, "reviews", c.root);
  c.word_vectors = optional_path(doc, "word_vectors", c.root);

  if (doc.contains("traces")) {
    const json& t = doc["traces"];
    if (t.is_string()) {
      const fs::path index = io::resolve(c.root, t.get<std::string>());
      if (!fs::exists(index)) bad_config("'traces' refers to missing file " + index.string());
      c.traces = load_trace_index(index);
    } else {
      c.traces = parse_trace_index(t, c.root, ErrorCode::InvalidConfig);
    }
  }

  if (doc.contains("apps")) {
    if (!doc["apps"].is_array()) bad_config("'apps' must be a list");
    for (const auto& a : doc["apps"]) {
      if (!a.is_object() || !a.contains("id") || !a.contains("path")) {
        bad_config("app entries need 'id' and 'path'");
      }
      AppEntry e;
      e.id = get_or<std::string>(a, "id", "");
      e.scheme = get_or<std::string>(a, "scheme", "");
      const std::string kind = get_or<std::string>(a, "kind", "tree");
      if (kind == "tree") {
        e.input.kind = InputKind::DecompiledTree;
      } else if (kind == "dex") {
        e.input.kind = InputKind::RawDex;
      } else {
        bad_config("app '" + e.id + "': kind must be 'tree' or 'dex'");
      }
      e.input.root = io::resolve(c.root, get_or<std::string>(a, "path", ""));
      if (!e.scheme.empty()) c.scheme_of_app[e.id] = e.scheme;
      c.apps.push_back(std::move(e));
    }
  }
  if (doc.contains("scheme_of_app")) {
    if (!doc["scheme_of_app"].is_object()) bad_config("'scheme_of_app' must be an object");
    for (const auto& [app, scheme] : doc["scheme_of_app"].items()) {
      if (!scheme.is_string()) bad_config("scheme_of_app values must be strings");
      c.scheme_of_app[app] = scheme.get<std::string>();
    }
  }

  if (doc.contains("data_plan")) {
    const json& d = doc["data_plan"];
    c.data_plan = analytics::DataPlan::gigabytes(get_or(d, "price", 25.0), get_or(d, "quota_gb", 5.0));
    if (!(c.data_plan.quota_bytes > 0.0)) bad_config("data_plan quota_gb must be positive");
  }
  c.embedding_dim = get_or<std::size_t>(doc, "embedding_dim", c.embedding_dim);
  if (c.embedding_dim == 0) bad_config("embedding_dim must be positive");

  if (doc.contains("defaults")) {
    const json& d = doc["defaults"];
    c.k = get_or<std::size_t>(d, "k", c.k);
    c.rating_cutoff = get_or<int>(d, "rating_cutoff", c.rating_cutoff);
    c.runs_expected = get_or<std::size_t>(d, "runs_expected", c.runs_expected);
    c.seed = get_or<std::uint64_t>(d, "seed", c.seed);
    const std::string g = get_or<std::string>(d, "granularity", "scheme");
    if (g == "app") {
      c.granularity = Granularity::App;
    } else if (g != "scheme") {
      bad_config("defaults.granularity must be 'scheme' or 'app'");
    }
  }

  if (doc.contains("simulate")) {
    const json& s = doc["simulate"];
    SimulateSpec spec;
    spec.runs = get_or<std::size_t>(s, "runs", spec.runs);
    spec.noise = get_or(s, "noise", spec.noise);
    spec.duration_s = get_or(s, "duration_s", spec.duration_s);
    if (spec.runs == 0) bad_config("simulate.runs must be positive");
    if (s.contains("prototype")) spec.prototype = parse_plants(s["prototype"], spec.prototype);
    if (s.contains("schemes")) {
      for (const auto& [scheme, lifts] : s["schemes"].items()) {
        spec.lifts[scheme] = parse_plants(lifts, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
      }
    }
    c.simulate = std::move(spec);
  }
  return c;
}

StageResult run_inspect(const WorkspaceConfig& config) {
  return guarded([&](StageResult& result) {
    const AdNetworkCatalog catalog = config.catalog ? load_catalog(*config.catalog) : default_catalog();
    const fs::path dir = config.output_dir / "inspect";
    std::string csv = analytics::csv_line({"app_id", "scheme", "networks", "placements", "ad_count"});
    ojson apps = ojson::array();
    for (const auto& app : config.apps) {
      try {
        if (!fs::exists(app.input.root)) {
          throw Error(ErrorCode::UnreadableInput, "cannot read " + app.input.root.string());
        }
        const auto networks = detect_networks(app.input, catalog);
        AdIntegrationScheme scheme;
        if (app.input.kind == InputKind::RawDex) {
          scheme.warnings.push_back("RawDex input: networks only, formats not resolved");
        } else {
          scheme = extract_ad_formats(app.input, catalog);
        }
        write_text(dir / (app.id + ".json"), scheme_report_json(app.id, scheme), result);
        std::string nets;
        for (const auto& n : networks) nets += (nets.empty() ? "" : ";") + n;
        csv += analytics::csv_line({app.id, app.scheme, nets, placements_text(scheme),
                                    std::to_string(scheme.ad_count())});
        ojson entry;
        entry["app_id"] = app.id;
        entry["scheme"] = app.scheme;
        entry["networks"] = networks;
        entry["placements"] = placements_text(scheme);
        entry["ad_count"] = scheme.ad_count();
        apps.push_back(std::move(entry));
        for (const auto& w : scheme.warnings) result.warnings.push_back(app.id + ": " + w);
      } catch (const Error& e) {
        result.errors.push_back(app.id + " (" + app.input.root.string() + "): " + e.what());
      }
    }
    write_text(dir / "schemes.csv", csv, result);
    ojson summary;
    summary["apps"] = std::move(apps);
    summary["warnings"] = result.warnings;
    summary["errors"] = result.errors;
    write_json(dir / "summary.json", summary, result);
  });
}

StageResult run_simulate(const WorkspaceConfig& config) {
  return guarded([&](StageResult& result) {
    if (!config.simulate) bad_config("no 'simulate' section in the workspace config");
    const SimulateSpec& spec = *config.simulate;
    const fs::path dir = config.output_dir / "simulate";

    std::vector<std::pair<std::string, simdevice::MetricPlants>> groups{{"prototype", spec.prototype}};
    for (const auto& [scheme, lifts] : spec.lifts) {
      groups.emplace_back(scheme, simdevice::scale_plants(spec.prototype, lifts));
    }
    ojson index;
    index["baseline"] = ojson::array();
    index["schemes"] = ojson::object();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& [name, plants] = groups[g];
      ojson manifests = ojson::array();
      for (std::size_t r = 0; r < spec.runs; ++r) {
        simdevice::SessionPlan plan;
        plan.label = name + "-run" + std::to_string(r + 1);
        plan.duration_s = spec.duration_s;
        plan.plants = plants;
        plan.noise = simdevice::NoiseSpec::uniform(spec.noise);
        plan.seed = session_seed(config.seed, g, r);
        const fs::path run_dir = dir / name / ("run" + std::to_string(r + 1));
        const auto manifest = simdevice::write_session(run_dir, plan, simdevice::generate_session(plan));
        for (const char* f : {"top.log", "packet.log", "proc.log", "ground_truth.json"}) {
          result.written.push_back(run_dir / f);
        }
        result.written.push_back(manifest);
        manifests.push_back(fs::relative(manifest, dir).generic_string());
      }
      if (g == 0) {
        index["baseline"] = std::move(manifests);
      } else {
        index["schemes"][name] = std::move(manifests);
      }
    }
    write_json(dir / "index.json", index, result);
  });
}

StageResult run_profile(const WorkspaceConfig& config) {
  return guarded([&](StageResult& result) {
    if (!config.power_model) bad_config("no 'power_model' in the workspace config");
    const power::PowerModel model = power::load_power_model(*config.power_model);
    TraceIndex traces;
    if (config.traces) {
      traces = *config.traces;
    } else {
      const fs::path index = config.output_dir / "simulate" / "index.json";
      if (!fs::exists(index)) bad_config("no 'traces' configured and " + index.string() + " missing");
      traces = load_trace_index(index);
    }

    std::map<std::string, std::size_t> used_runs;
    auto aggregate = [&](const std::string& group, const std::vector<fs::path>& manifests)
        -> std::optional<trace::RunAggregate> {
      std::vector<trace::CostVector> runs;
      for (const auto& m : manifests) {
        try {
          const auto session = trace::load_session(m);
          const auto costs = trace::compute_cost_vector(session);
          for (const auto& w : costs.warnings) result.warnings.push_back(m.string() + ": " + w);
          runs.push_back(trace::estimate_power(costs.cost, model));
        } catch (const Error& e) {
          result.errors.push_back(group + " session " + m.string() + ": " + e.what());
        }
      }
      if (runs.empty()) {
        result.errors.push_back(group + ": no usable sessions");
        return std::nullopt;
      }
      used_runs[group] = runs.size();
      auto agg = trace::aggregate_runs(runs, config.runs_expected);
      for (const auto& w : agg.warnings) result.warnings.push_back(group + ": " + w);
      return agg;
    };

    const fs::path dir = config.output_dir / "profile";
    std::string costs_csv = metric_header("group");
    std::string deltas_csv = metric_header("scheme");
    std::string rates_csv = metric_header("scheme");
    ojson summary;
    ojson schemes = ojson::object();

    const auto baseline = aggregate("prototype", traces.baseline);
    if (baseline) {
      std::vector<std::string> row{"prototype"};
      for (Metric m : trace::kAllMetrics) row.push_back(fixed(baseline->mean[m]));
      costs_csv += analytics::csv_line(row);
      summary["prototype"] = cost_json(baseline->mean);
    }
    for (const auto& [scheme, manifests] : traces.schemes) {
      const auto agg = aggregate(scheme, manifests);
      if (!agg) continue;
      std::vector<std::string> row{scheme};
      for (Metric m : trace::kAllMetrics) row.push_back(fixed(agg->mean[m]));
      costs_csv += analytics::csv_line(row);

      ojson entry;
      entry["runs"] = used_runs[scheme];
      entry["cost"] = cost_json(agg->mean);
      if (baseline) {
        const auto sep = trace::separate_costs(agg->mean, baseline->mean);
        std::vector<std::string> drow{scheme}, rrow{scheme};
        ojson rates;
        for (Metric m : trace::kAllMetrics) {
          drow.push_back(fixed(sep.delta[m]));
          const auto& rate = sep.rate(m);
          rrow.push_back(rate ? fixed(*rate) : "");
          rates[std::string(trace::metric_name(m))] = rate ? ojson(stored(*rate)) : ojson(nullptr);
        }
        deltas_csv += analytics::csv_line(drow);
        rates_csv += analytics::csv_line(rrow);
        entry["delta"] = cost_json(sep.delta);
        entry["increase_rate"] = std::move(rates);
        entry["traffic_dollar_cost"] =
            stored(analytics::traffic_dollar_cost(std::max(0.0, sep.delta.total_bytes), config.data_plan));
      }
      schemes[scheme] = std::move(entry);
    }
    summary["schemes"] = std::move(schemes);
    summary["data_plan"] = {{"price", config.data_plan.price},
                            {"quota_bytes", config.data_plan.quota_bytes}};
    summary["warnings"] = result.warnings;
    summary["errors"] = result.errors;

    write_text(dir / "costs.csv", costs_csv, result);
    write_text(dir / "deltas.csv", deltas_csv, result);
    write_text(dir / "increase_rates.csv", rates_csv, result);
    write_json(dir / "summary.json", summary, result);
  });
}

StageResult run_reviews(const WorkspaceConfig& config) {
  return guarded([&](StageResult& result) {
    if (!config.reviews) bad_config("no 'reviews' in the workspace config");
    const auto all = reviews::load_reviews(*config.reviews);
    const auto stopwords =
        config.stopwords ? reviews::load_stopwords(*config.stopwords) : reviews::default_stopwords();
    const auto table = config.keywords ? reviews::load_keyword_table(*config.keywords)
                                       : reviews::default_keyword_table();
    const auto ad_reviews = reviews::filter_ad_reviews(all);
    const auto phrases = reviews::extract_phrase_candidates(ad_reviews, stopwords);

    const reviews::WordVectors vectors =
        config.word_vectors
            ? reviews::load_word_vectors(*config.word_vectors)
            : reviews::ppmi_word_vectors(reviews::content_tokens(ad_reviews, stopwords),
                                         config.embedding_dim);
    const auto embedded = reviews::embed_phrases(phrases, vectors, &result.warnings);
    const auto clusters = reviews::cluster_phrases(embedded, config.k, config.seed);

    const auto ratings =
        reviews::aggregate_cost_ratings(ad_reviews, table, config.scheme_of_app, config.rating_cutoff);
    const auto global = reviews::global_cost_ratings(ad_reviews, table, config.rating_cutoff);
    std::map<std::string, std::string> app_self;
    for (const auto& [app, scheme] : config.scheme_of_app) app_self[app] = app;
    const auto app_ratings =
        reviews::aggregate_cost_ratings(ad_reviews, table, app_self, config.rating_cutoff);

    const fs::path dir = config.output_dir / "reviews";
    std::string phrases_csv = analytics::csv_line({"phrase", "count"});
    for (const auto& p : phrases) phrases_csv += analytics::csv_line({p.text(), std::to_string(p.count)});
    std::string clusters_csv = analytics::csv_line({"cluster", "phrase", "count"});
    ojson clusters_json = ojson::object();
    for (const auto& [id, members] : clusters) {
      ojson list = ojson::array();
      for (const auto& p : members) {
        clusters_csv += analytics::csv_line({std::to_string(id), p.text(), std::to_string(p.count)});
        list.push_back(p.text());
      }
      clusters_json[std::to_string(id)] = std::move(list);
    }
    std::string ratings_csv = analytics::csv_line({"scheme", "cost_type", "mean_rating", "count"});
    ojson ratings_json = ojson::object();
    for (const auto& [key, cell] : ratings) {
      const std::string type(reviews::to_string(key.second));
      ratings_csv += analytics::csv_line({key.first, type, fixed(cell.mean), std::to_string(cell.count)});
      ratings_json[key.first][type] = {{"mean", stored(cell.mean)}, {"count", cell.count}};
    }
    ojson app_ratings_json = ojson::object();
    for (const auto& [key, cell] : app_ratings) {
      app_ratings_json[key.first][std::string(reviews::to_string(key.second))] = {
          {"mean", stored(cell.mean)}, {"count", cell.count}};
    }
    ojson global_json = ojson::object();
    for (const auto& [type, cell] : global) {
      global_json[std::string(reviews::to_string(type))] = {{"mean", stored(cell.mean)},
                                                            {"count", cell.count}};
    }

    ojson summary;
    summary["reviews_total"] = all.size();
    summary["ad_reviews"] = ad_reviews.size();
    summary["ad_review_share"] = stored(all.empty() ? 0.0
                                                    : static_cast<double>(ad_reviews.size()) /
                                                          static_cast<double>(all.size()));
    summary["annoying_share"] = stored(reviews::share_mentioning(ad_reviews, "annoy"));
    summary["uninstall_share"] = stored(reviews::share_mentioning(ad_reviews, "uninstall"));
    summary["phrase_candidates"] = phrases.size();
    summary["k"] = config.k;
    summary["seed"] = config.seed;
    summary["rating_cutoff"] = config.rating_cutoff;
    summary["embedding"] = config.word_vectors ? "file" : "ppmi";
    summary["clusters"] = std::move(clusters_json);
    summary["global_ratings"] = std::move(global_json);
    summary["ratings"] = std::move(ratings_json);
    summary["app_ratings"] = std::move(app_ratings_json);
    summary["warnings"] = result.warnings;

    write_text(dir / "phrases.csv", phrases_csv, result);
    write_text(dir / "clusters.csv", clusters_csv, result);
    write_text(dir / "ratings.csv", ratings_csv, result);
    write_json(dir / "summary.json", summary, result);
  });
}

StageResult run_correlate(const WorkspaceConfig& config) {
  return guarded([&](StageResult& result) {
    const json profile = read_stage_summary(config, "profile");
    const json review = read_stage_summary(config, "reviews");

    std::map<std::string, std::vector<double>> ad_counts;  // by scheme
    std::map<std::string, double> app_ad_count;
    std::map<std::string, std::string> app_scheme = config.scheme_of_app;
    const fs::path inspect_summary = config.output_dir / "inspect" / "summary.json";
    if (fs::exists(inspect_summary)) {
      const json inspect = parse_json_file(inspect_summary, ErrorCode::IoError);
      for (const auto& app : inspect.value("apps", json::array())) {
        const std::string scheme = app.value("scheme", "");
        const std::string id = app.value("app_id", "");
        const double n = app.value("ad_count", 0.0);
        if (!scheme.empty()) ad_counts[scheme].push_back(n);
        if (!id.empty()) {
          app_ad_count[id] = n;
          if (!scheme.empty()) app_scheme[id] = scheme;
        }
      }
    } else {
      result.warnings.push_back("inspect output missing; NumAds has no measured values");
    }

    std::set<std::string> profiled, rated;
    for (const auto& [scheme, entry] : member(profile, "schemes").items()) {
      if (entry.contains("delta")) profiled.insert(scheme);
    }
    for (const auto& [scheme, cells] : member(review, "ratings").items()) {
      rated.insert(scheme);
    }
    for (const auto& s : profiled) {
      if (!rated.contains(s)) result.warnings.push_back("UnjoinableScheme: " + s + " has no ratings");
    }
    for (const auto& s : rated) {
      if (!profiled.contains(s)) {
        result.warnings.push_back("UnjoinableScheme: " + s + " has no profile");
      }
    }

    auto observe = [&](const std::string& unit, const std::string& scheme, const json& cells) {
      const json& delta = profile["schemes"][scheme]["delta"];
      analytics::SchemeObservation o;
      o.scheme = unit;
      o.cost[CostType::MemCpu] = delta.at("cpu_util_avg_pct").get<double>();
      o.cost[CostType::Traffic] = delta.at("total_bytes").get<double>();
      o.cost[CostType::Battery] = delta.at("power_mw").get<double>();
      for (const auto& [type, cell] : cells.items()) {
        if (auto t = reviews::parse_cost_type(type)) o.rating[*t] = cell.at("mean").get<double>();
      }
      return o;
    };
    const bool per_app = config.granularity == Granularity::App;
    std::vector<analytics::SchemeObservation> observations;
    if (per_app) {
      for (const auto& [app, cells] : member(review, "app_ratings").items()) {
        const auto s = app_scheme.find(app);
        if (s == app_scheme.end() || !profiled.contains(s->second)) continue;
        auto o = observe(app, s->second, cells);
        if (auto n = app_ad_count.find(app); n != app_ad_count.end()) {
          o.cost[CostType::NumAds] = n->second;
        }
        observations.push_back(std::move(o));
      }
    } else {
      for (const auto& scheme : profiled) {
        if (!rated.contains(scheme)) continue;
        auto o = observe(scheme, scheme, review["ratings"][scheme]);
        if (auto it = ad_counts.find(scheme); it != ad_counts.end()) {
          double total = 0.0;
          for (double v : it->second) total += v;
          o.cost[CostType::NumAds] = total / static_cast<double>(it->second.size());
        }
        observations.push_back(std::move(o));
      }
    }

    const std::map<CostType, std::string> measure{{CostType::NumAds, "ad_count"},
                                                  {CostType::MemCpu, "cpu_util_avg_pct_delta"},
                                                  {CostType::Traffic, "total_bytes_delta"},
                                                  {CostType::Battery, "power_mw_delta"}};
    std::string obs_csv = analytics::csv_line(
        {per_app ? "app_id" : "scheme", "cost_type", "measure", "measured", "rating"});
    for (const auto& o : observations) {
      for (CostType t : reviews::kAllCostTypes) {
        const auto c = o.cost.find(t);
        const auto r = o.rating.find(t);
        obs_csv += analytics::csv_line({o.scheme, std::string(reviews::to_string(t)), measure.at(t),
                                        c == o.cost.end() ? "" : fixed(c->second),
                                        r == o.rating.end() ? "" : fixed(r->second)});
      }
    }

    std::string corr_csv = analytics::csv_line({"cost_type", "measure", "schemes", "pearson"});
    ojson correlations = ojson::object();
    for (CostType t : reviews::kAllCostTypes) {
      std::size_t n = 0;
      for (const auto& o : observations) n += o.cost.contains(t) && o.rating.contains(t);
      const std::string name(reviews::to_string(t));
      std::optional<double> r;
      try {
        r = analytics::correlate_cost_type(observations, t);
      } catch (const Error& e) {
        result.warnings.push_back(name + ": " + e.what());
      }
      corr_csv += analytics::csv_line({name, measure.at(t), std::to_string(n), r ? fixed(*r) : ""});
      correlations[name] = {{"measure", measure.at(t)},
                            {"schemes", n},
                            {"pearson", r ? ojson(stored(*r)) : ojson(nullptr)}};
    }

    const fs::path dir = config.output_dir / "correlate";
    ojson summary;
    summary["granularity"] = per_app ? "app" : "scheme";
    summary["joined_schemes"] = observations.size();
    summary["correlations"] = std::move(correlations);
    summary["warnings"] = result.warnings;
    write_text(dir / "observations.csv", obs_csv, result);
    write_text(dir / "correlations.csv", corr_csv, result);
    write_json(dir / "summary.json", summary, result);
  });
}

StageResult run_report(const WorkspaceConfig& config) {
  return guarded([&](StageResult& result) {
    const json profile = read_stage_summary(config, "profile");
    const json review = read_stage_summary(config, "reviews");
    const json corr = read_stage_summary(config, "correlate");

    std::string long_csv = analytics::csv_line({"series", "scheme", "key", "value"});
    std::map<std::string, std::vector<double>> rates_by_metric;
    ojson traffic = ojson::object();
    for (const auto& [scheme, entry] : member(profile, "schemes").items()) {
      if (!entry.contains("increase_rate")) continue;
      for (Metric m : trace::kAllMetrics) {
        const std::string name(trace::metric_name(m));
        const json& v = entry["increase_rate"][name];
        if (v.is_null()) continue;
        rates_by_metric[name].push_back(v.get<double>());
        long_csv += analytics::csv_line({"increase_rate", scheme, name, fixed(v.get<double>())});
      }
      const double usd = entry.value("traffic_dollar_cost", 0.0);
      long_csv += analytics::csv_line({"traffic_cost_usd", scheme, "per_session",
                                       analytics::format_fixed(usd, 4)});
      traffic[scheme] = analytics::round_half_even(usd, 4);
    }
    for (const auto& [scheme, cells] : member(review, "ratings").items()) {
      for (const auto& [type, cell] : cells.items()) {
        long_csv += analytics::csv_line({"rating", scheme, type, fixed(cell.at("mean").get<double>())});
      }
    }
    ojson correlations = ojson::object();
    for (const auto& [type, cell] : member(corr, "correlations").items()) {
      const json& r = cell.at("pearson");
      long_csv += analytics::csv_line({"pearson", "", type, r.is_null() ? "" : fixed(r.get<double>())});
      correlations[type] = r.is_null() ? ojson(nullptr) : ojson(analytics::round_half_even(r.get<double>(), 3));
    }

    std::string stdev_csv = analytics::csv_line({"metric", "schemes", "stdev_increase_rate"});
    ojson stdevs = ojson::object();
    for (Metric m : trace::kAllMetrics) {
      const std::string name(trace::metric_name(m));
      const auto it = rates_by_metric.find(name);
      if (it == rates_by_metric.end() || it->second.size() < 2) {
        result.warnings.push_back(name + ": fewer than two schemes, no standard deviation");
        continue;
      }
      const double sd = analytics::sample_stdev(it->second);
      stdev_csv += analytics::csv_line({name, std::to_string(it->second.size()), fixed(sd)});
      stdevs[name] = stored(sd);
    }

    const fs::path dir = config.output_dir / "report";
    ojson summary;
    summary["stdev_increase_rate"] = std::move(stdevs);
    summary["correlations"] = std::move(correlations);
    summary["traffic_cost_usd"] = std::move(traffic);
    summary["global_ratings"] = review.value("global_ratings", json::object());
    summary["annoying_share"] = review.value("annoying_share", 0.0);
    summary["uninstall_share"] = review.value("uninstall_share", 0.0);
    summary["warnings"] = result.warnings;
    write_text(dir / "long.csv", long_csv, result);
    write_text(dir / "stdev.csv", stdev_csv, result);
    write_json(dir / "summary.json", summary, result);
  });
}

}  // namespace intelliad::pipeline
