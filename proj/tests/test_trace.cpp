#include <algorithm>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "intelliad/error.hpp"
#include "intelliad/random.hpp"
#include "intelliad/trace.hpp"

using namespace intelliad;
using namespace intelliad::trace;
namespace fs = std::filesystem;

namespace {

template <typename Fn>
Error error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an intelliad::Error");
  return Error(ErrorCode::IoError, "");
}

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("intelliad_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

power::PowerModel test_model() {
  power::PowerModel m;
  m.wifi = {1.5, 200.0, 0.5, 230.0, 30.0};
  m.cpu_bins = {{500000, 300.0, 30.0}, {1000000, 600.0, 40.0}};
  return m;
}

}  // namespace

TEST_SUITE("trace") {

TEST_CASE("top log parsing") {
  const auto s = parse_top_log("# t,pid,rss,cpu\n0,42,1000,1.5\n\n1, 42 ,1100,2.5\n1,7,50,0\n");
  REQUIRE(s.size() == 3);
  CHECK(s[1] == TopSample{1.0, 42, 1100.0, 2.5});
  const auto filtered = parse_top_log("0,42,1000,1.5\n1,7,50,0\n2,42,900,0.5\n", 42);
  CHECK(filtered.size() == 2);
}

TEST_CASE("malformed lines carry their line number") {
  auto e = error_of([] { parse_top_log("0,1,2,3\n\n1,1,x,3\n"); });
  CHECK(e.code() == ErrorCode::MalformedLine);
  CHECK(e.line() == 3);
  CHECK(error_of([] { parse_top_log("0,1,2\n"); }).code() == ErrorCode::MalformedLine);
  CHECK(error_of([] { parse_top_log("0,1,2,3,4\n"); }).code() == ErrorCode::MalformedLine);
  CHECK(error_of([] { parse_top_log("0,1,2,101\n"); }).code() == ErrorCode::MalformedLine);
  CHECK(error_of([] { parse_top_log("0,1,-2,1\n"); }).code() == ErrorCode::MalformedLine);
  CHECK(error_of([] { parse_packet_log("0,sideways,10\n"); }).code() == ErrorCode::MalformedLine);
  CHECK(error_of([] { parse_packet_log("0,in,0\n"); }).code() == ErrorCode::MalformedLine);
  CHECK(error_of([] { parse_proc_log("0,0,100\n"); }).code() == ErrorCode::MalformedLine);
  CHECK(error_of([] { parse_proc_log("0,3,0\n"); }).code() == ErrorCode::MalformedLine);
  CHECK(error_of([] { parse_proc_log("-1,3,10\n"); }).code() == ErrorCode::MalformedLine);
}

TEST_CASE("timestamps may not go backwards") {
  auto e = error_of([] { parse_packet_log("0,in,10\n2,out,20\n1,in,5\n"); });
  CHECK(e.code() == ErrorCode::NonMonotonicTimestamp);
  CHECK(e.line() == 3);
  CHECK(parse_packet_log("1,in,10\n1,out,20\n").size() == 2);
}

TEST_CASE("canonical CSV round-trips") {
  Rng rng(3);
  std::vector<TopSample> top;
  std::vector<PacketRecord> packets;
  std::vector<ProcSample> proc;
  double t = 0.0;
  for (int i = 0; i < 50; ++i) {
    t += rng.uniform();
    top.push_back({t, 99, rng.uniform() * 1e5, rng.uniform() * 100.0});
    packets.push_back({t, i % 2 ? Direction::Out : Direction::In, 1 + rng.below(1500)});
    proc.push_back({t, static_cast<std::uint32_t>(1 + rng.below(80)), 1 + rng.below(2000000)});
  }
  CHECK(parse_top_log(to_csv(std::span<const TopSample>(top))) == top);
  CHECK(parse_packet_log(to_csv(std::span<const PacketRecord>(packets))) == packets);
  CHECK(parse_proc_log(to_csv(std::span<const ProcSample>(proc))) == proc);
}

TEST_CASE("cost vector from a small session") {
  MeasurementSession s;
  s.label = "x";
  s.duration_s = 4.0;
  s.top_samples = {{0, 1, 100, 2}, {1, 1, 300, 4}};
  s.packets = {{0.5, Direction::In, 100}, {1.5, Direction::Out, 300}};
  s.proc_samples = {{0, 10, 1000}, {1, 20, 3000}};
  const auto r = compute_cost_vector(s);
  CHECK(r.warnings.empty());
  CHECK(r.cost.mem_rss_avg_kb == 200.0);
  CHECK(r.cost.cpu_util_avg_pct == 3.0);
  CHECK(r.cost.thread_count_avg == 15.0);
  CHECK(r.cost.avg_cpu_freq_khz == 2000.0);
  CHECK(r.cost.total_bytes == 400.0);
  CHECK(r.cost.packet_count == 2.0);
  CHECK(r.cost.avg_packet_rate_pps == 0.5);
  CHECK(r.cost.power_mw == 0.0);
}

TEST_CASE("empty sample lists zero-fill with warnings") {
  MeasurementSession s;
  s.duration_s = 10.0;
  s.packets = {{1.0, Direction::In, 10}};
  const auto r = compute_cost_vector(s);
  CHECK(r.warnings.size() == 2);
  CHECK(r.cost.mem_rss_avg_kb == 0.0);
  CHECK(r.cost.packet_count == 1.0);

  MeasurementSession zero;
  zero.top_samples = {{0, 1, 1, 1}};
  CHECK(error_of([&] { compute_cost_vector(zero); }).code() == ErrorCode::ZeroDuration);
  MeasurementSession empty;
  empty.duration_s = 5.0;
  CHECK(error_of([&] { compute_cost_vector(empty); }).code() == ErrorCode::EmptySession);
}

TEST_CASE("power estimate uses utilization as a fraction") {
  CostVector c;
  c.avg_packet_rate_pps = 10.0;
  c.cpu_util_avg_pct = 50.0;
  c.avg_cpu_freq_khz = 900000.0;
  const auto p = estimate_power(c, test_model());
  CHECK(p.power_mw == doctest::Approx(1.5 * 10.0 + 200.0 + 600.0 * 0.5 + 40.0));
}

TEST_CASE("cost separation") {
  CostVector proto, ad;
  for (Metric m : kAllMetrics) {
    proto[m] = 10.0;
    ad[m] = 15.0;
  }
  proto.total_bytes = 0.0;
  const auto sep = separate_costs(ad, proto);
  CHECK(sep.delta.cpu_util_avg_pct == 5.0);
  CHECK(*sep.rate(Metric::CpuUtil) == 0.5);
  CHECK_FALSE(sep.rate(Metric::TotalBytes).has_value());
  CHECK(sep.delta.total_bytes == 15.0);

  const auto self = separate_costs(ad, ad);
  for (Metric m : kAllMetrics) CHECK(*self.rate(m) == 0.0);

  const auto lower = separate_costs(proto, ad);
  CHECK(*lower.rate(Metric::MemRss) < 0.0);
}

TEST_CASE("run aggregation is order independent") {
  Rng rng(5);
  std::vector<CostVector> runs(4);
  for (auto& r : runs) {
    for (Metric m : kAllMetrics) r[m] = rng.uniform() * 1e6;
  }
  const auto a = aggregate_runs(runs);
  CHECK(a.warnings.empty());
  for (int i = 0; i < 10; ++i) {
    std::vector<CostVector> shuffled = runs;
    for (std::size_t j = shuffled.size() - 1; j > 0; --j) {
      std::swap(shuffled[j], shuffled[rng.below(j + 1)]);
    }
    CHECK(aggregate_runs(shuffled).mean == a.mean);
  }
  CHECK(aggregate_runs(std::span(runs).first(3)).warnings.size() == 1);
  CHECK(error_of([] { aggregate_runs({}); }).code() == ErrorCode::EmptyRunList);
}

TEST_CASE("metric names") {
  for (Metric m : kAllMetrics) CHECK(parse_metric(metric_name(m)) == m);
  CHECK_FALSE(parse_metric("nope").has_value());
}

TEST_CASE("sessions load relative to their manifest") {
  const auto dir = temp_dir("session");
  write(dir / "top.log", "0,5,100,1\n1,6,999,9\n2,5,300,3\n");
  write(dir / "pkt.log", "0.5,in,10\n");
  write(dir / "proc.log", "0,4,1000\n");
  write(dir / "m.json",
        R"({"label":"s","duration_s":2,"top_log":"top.log","packet_log":"pkt.log","proc_log":"proc.log","pid":5})");
  const auto s = load_session(dir / "m.json");
  CHECK(s.label == "s");
  CHECK(s.top_samples.size() == 2);
  CHECK(compute_cost_vector(s).cost.mem_rss_avg_kb == 200.0);

  write(dir / "late.json",
        R"({"label":"s","duration_s":1.5,"top_log":"top.log","packet_log":"pkt.log","proc_log":"proc.log"})");
  CHECK(error_of([&] { load_session(dir / "late.json"); }).code() == ErrorCode::SampleBeyondDuration);
  write(dir / "bad.json", R"({"label":"s","top_log":"top.log"})");
  CHECK(error_of([&] { load_session(dir / "bad.json"); }).code() == ErrorCode::MalformedManifest);
  write(dir / "missing.json",
        R"({"label":"s","duration_s":2,"top_log":"nope.log","packet_log":"pkt.log","proc_log":"proc.log"})");
  CHECK(error_of([&] { load_session(dir / "missing.json"); }).code() == ErrorCode::IoError);
  fs::remove_all(dir);
}

}
