#include "intelliad/simdevice.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "intelliad/error.hpp"
#include "intelliad/io.hpp"
#include "intelliad/random.hpp"

namespace intelliad::simdevice {

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidPlan, why); }

std::size_t sample_count(double duration, double interval) {
  return static_cast<std::size_t>(std::llround(duration / interval));
}

// Integer values whose sum is round(mean * n), as evenly spread as possible.
std::vector<std::uint64_t> spread(double mean, std::size_t n) {
  const auto total = static_cast<std::uint64_t>(std::llround(mean * static_cast<double>(n)));
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (i + 1) * total / n - i * total / n;
  return out;
}

double noisy(double value, double sd, Rng& rng) {
  if (sd == 0.0) return value;
  return std::max(0.0, value * (1.0 + sd * rng.normal()));
}

std::uint64_t noisy_int(std::uint64_t value, double sd, std::uint64_t floor, Rng& rng) {
  if (sd == 0.0) return value;
  const double v = std::llround(noisy(static_cast<double>(value), sd, rng));
  return std::max<std::uint64_t>(floor, static_cast<std::uint64_t>(v));
}

double exact_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

nlohmann::ordered_json plants_json(const MetricPlants& p) {
  return {{"rss_kb", p.rss_kb},
          {"cpu_pct", p.cpu_pct},
          {"thread_count", p.thread_count},
          {"packet_rate_pps", p.packet_rate_pps},
          {"bytes_per_packet", p.bytes_per_packet},
          {"cpu_freq_khz", p.cpu_freq_khz}};
}

}  // namespace

void SessionPlan::validate() const {
  for (double v : {duration_s, op_interval_s, top_interval_s, proc_interval_s}) {
    if (!(v > 0.0) || !std::isfinite(v)) invalid("durations and intervals must be positive");
  }
  const double ops = duration_s / op_interval_s;
  if (std::abs(ops - std::round(ops)) > 1e-9 * std::max(1.0, ops)) {
    invalid("duration_s must be a multiple of op_interval_s");
  }
  const auto& p = plants;
  for (double v : {p.rss_kb, p.cpu_pct, p.thread_count, p.packet_rate_pps, p.bytes_per_packet,
                   p.cpu_freq_khz}) {
    if (!(v >= 0.0) || !std::isfinite(v)) invalid("plants must be finite and >= 0");
  }
  if (p.cpu_pct > 100.0) invalid("cpu_pct plant must be <= 100");
  if (p.thread_count < 1.0) invalid("thread_count plant must be >= 1");
  if (p.cpu_freq_khz < 1.0) invalid("cpu_freq_khz plant must be >= 1");
  if (p.packet_rate_pps > 0.0 && p.bytes_per_packet < 1.0) {
    invalid("bytes_per_packet must be >= 1 when packets are sent");
  }
  const auto& n = noise;
  for (double v : {n.rss_kb, n.cpu_pct, n.thread_count, n.bytes_per_packet, n.cpu_freq_khz}) {
    if (!(v >= 0.0) || !std::isfinite(v)) invalid("noise stddevs must be >= 0");
  }
}

MetricPlants scale_plants(const MetricPlants& p, const MetricPlants& f) {
  return {p.rss_kb * f.rss_kb,
          p.cpu_pct * f.cpu_pct,
          p.thread_count * f.thread_count,
          p.packet_rate_pps * f.packet_rate_pps,
          p.bytes_per_packet * f.bytes_per_packet,
          p.cpu_freq_khz * f.cpu_freq_khz};
}

GeneratedSession generate_session(const SessionPlan& plan) {
  plan.validate();
  Rng rng(plan.seed);
  GeneratedSession out;
  auto& s = out.session;
  s.label = plan.label;
  s.duration_s = plan.duration_s;
  const auto& p = plan.plants;
  const auto& n = plan.noise;

  const std::size_t n_top = sample_count(plan.duration_s, plan.top_interval_s);
  std::vector<double> rss, cpu;
  for (std::size_t i = 0; i < n_top; ++i) {
    trace::TopSample t;
    t.t = static_cast<double>(i) * plan.top_interval_s;
    t.pid = plan.pid;
    t.rss_kb = noisy(p.rss_kb, n.rss_kb, rng);
    t.cpu_pct = std::min(100.0, noisy(p.cpu_pct, n.cpu_pct, rng));
    rss.push_back(t.rss_kb);
    cpu.push_back(t.cpu_pct);
    s.top_samples.push_back(t);
  }

  const std::size_t n_proc = sample_count(plan.duration_s, plan.proc_interval_s);
  const auto threads = spread(p.thread_count, n_proc);
  const auto freqs = spread(p.cpu_freq_khz, n_proc);
  std::vector<double> thread_vals, freq_vals;
  for (std::size_t i = 0; i < n_proc; ++i) {
    trace::ProcSample ps;
    ps.t = static_cast<double>(i) * plan.proc_interval_s;
    ps.thread_count = static_cast<std::uint32_t>(noisy_int(threads[i], n.thread_count, 1, rng));
    ps.cpu_freq_khz = noisy_int(freqs[i], n.cpu_freq_khz, 1, rng);
    thread_vals.push_back(ps.thread_count);
    freq_vals.push_back(static_cast<double>(ps.cpu_freq_khz));
    s.proc_samples.push_back(ps);
  }

  std::vector<double> times;
  if (p.packet_rate_pps > 0.0) {
    if (plan.arrivals == Arrivals::FixedRate) {
      const std::size_t count = sample_count(plan.duration_s * p.packet_rate_pps, 1.0);
      for (std::size_t i = 0; i < count; ++i) {
        const double jitter = (rng.uniform() - 0.5) * 0.5;
        times.push_back(std::min(plan.duration_s,
                                 (static_cast<double>(i) + 0.5 + jitter) / p.packet_rate_pps));
      }
    } else {
      for (double t = rng.exponential(p.packet_rate_pps); t <= plan.duration_s;
           t += rng.exponential(p.packet_rate_pps)) {
        times.push_back(t);
      }
    }
  }
  const auto sizes = spread(p.bytes_per_packet, times.size());
  std::uint64_t total_bytes = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    trace::PacketRecord r;
    r.t = times[i];
    r.direction = i % 3 == 2 ? trace::Direction::Out : trace::Direction::In;
    r.bytes = noisy_int(sizes[i], n.bytes_per_packet, 1, rng);
    total_bytes += r.bytes;
    s.packets.push_back(r);
  }

  auto& c = out.realized;
  c.mem_rss_avg_kb = exact_mean(rss);
  c.cpu_util_avg_pct = exact_mean(cpu);
  c.thread_count_avg = exact_mean(thread_vals);
  c.avg_cpu_freq_khz = exact_mean(freq_vals);
  c.total_bytes = static_cast<double>(total_bytes);
  c.packet_count = static_cast<double>(times.size());
  c.avg_packet_rate_pps = c.packet_count / plan.duration_s;
  return out;
}

std::filesystem::path write_session(const std::filesystem::path& dir, const SessionPlan& plan,
                                    const GeneratedSession& generated) {
  const auto& s = generated.session;
  io::write_file_atomic(dir / "top.log", trace::to_csv(std::span<const trace::TopSample>(s.top_samples)));
  io::write_file_atomic(dir / "packet.log", trace::to_csv(std::span<const trace::PacketRecord>(s.packets)));
  io::write_file_atomic(dir / "proc.log", trace::to_csv(std::span<const trace::ProcSample>(s.proc_samples)));

  nlohmann::ordered_json manifest;
  manifest["label"] = s.label;
  manifest["duration_s"] = s.duration_s;
  manifest["top_log"] = "top.log";
  manifest["packet_log"] = "packet.log";
  manifest["proc_log"] = "proc.log";
  manifest["pid"] = plan.pid;
  const auto manifest_path = dir / "manifest.json";
  io::write_file_atomic(manifest_path, manifest.dump(2) + "\n");

  nlohmann::ordered_json truth;
  truth["label"] = s.label;
  truth["seed"] = plan.seed;
  truth["planted"] = plants_json(plan.plants);
  nlohmann::ordered_json realized;
  for (auto m : trace::kAllMetrics) {
    if (m == trace::Metric::Power) continue;
    realized[std::string(trace::metric_name(m))] = generated.realized[m];
  }
  truth["realized"] = realized;
  io::write_file_atomic(dir / "ground_truth.json", truth.dump(2) + "\n");
  return manifest_path;
}

}  // namespace intelliad::simdevice
