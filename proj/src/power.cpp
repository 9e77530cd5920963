#include "intelliad/power.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "intelliad/error.hpp"
#include "intelliad/io.hpp"
#include "intelliad/simd/kernels.hpp"

namespace intelliad::power {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedPowerModel, what);
}

double number(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    malformed(std::string("missing numeric field '") + key + "'");
  }
  return obj[key].get<double>();
}

}  // namespace

void PowerModel::validate() const {
  const auto& w = wifi;
  for (double v : {w.beta_low, w.base_low, w.beta_high, w.base_high, w.threshold_pps}) {
    if (!std::isfinite(v)) malformed("WiFi coefficients must be finite");
  }
  if (!(w.threshold_pps > 0.0)) malformed("threshold_pps must be positive");
  if (cpu_bins.empty()) malformed("cpu_bins must not be empty");
  for (std::size_t i = 0; i < cpu_bins.size(); ++i) {
    const auto& bin = cpu_bins[i];
    if (bin.freq_khz == 0) malformed("freq_khz must be positive");
    if (!std::isfinite(bin.beta_active) || !std::isfinite(bin.beta_idle)) {
      malformed("CPU coefficients must be finite");
    }
    if (i > 0 && cpu_bins[i - 1].freq_khz >= bin.freq_khz) {
      malformed("cpu_bins frequencies must be strictly increasing");
    }
  }
}

const CpuPowerBin& PowerModel::nearest_bin(double freq_khz) const {
  if (cpu_bins.empty()) throw Error(ErrorCode::NoFrequencyBin, "power model has no CPU bins");
  const CpuPowerBin* best = &cpu_bins.front();
  double best_gap = std::abs(static_cast<double>(best->freq_khz) - freq_khz);
  for (const auto& bin : cpu_bins) {
    const double gap = std::abs(static_cast<double>(bin.freq_khz) - freq_khz);
    // Strict comparison keeps the lower frequency on ties (bins ascend).
    if (gap < best_gap) {
      best = &bin;
      best_gap = gap;
    }
  }
  return *best;
}

PowerModel parse_power_model(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("wifi") || !root["wifi"].is_object()) {
    malformed("expected an object with a 'wifi' object");
  }
  PowerModel model;
  const auto& w = root["wifi"];
  model.wifi = {number(w, "beta_low"), number(w, "base_low"), number(w, "beta_high"),
                number(w, "base_high"), number(w, "threshold_pps")};
  if (!root.contains("cpu_bins") || !root["cpu_bins"].is_array()) malformed("missing cpu_bins array");
  for (const auto& b : root["cpu_bins"]) {
    if (!b.is_object()) malformed("cpu_bins entries must be objects");
    if (!b.contains("freq_khz") || !b["freq_khz"].is_number_unsigned()) {
      malformed("freq_khz must be a positive integer");
    }
    model.cpu_bins.push_back(
        {b["freq_khz"].get<std::uint64_t>(), number(b, "beta_active"), number(b, "beta_idle")});
  }
  model.validate();
  return model;
}

PowerModel load_power_model(const std::filesystem::path& path) {
  return parse_power_model(io::read_file(path, ErrorCode::MalformedPowerModel));
}

std::string power_model_to_json(const PowerModel& model) {
  nlohmann::ordered_json doc;
  doc["wifi"] = {{"beta_low", model.wifi.beta_low},
                 {"base_low", model.wifi.base_low},
                 {"beta_high", model.wifi.beta_high},
                 {"base_high", model.wifi.base_high},
                 {"threshold_pps", model.wifi.threshold_pps}};
  doc["cpu_bins"] = nlohmann::ordered_json::array();
  for (const auto& b : model.cpu_bins) {
    doc["cpu_bins"].push_back(
        {{"freq_khz", b.freq_khz}, {"beta_active", b.beta_active}, {"beta_idle", b.beta_idle}});
  }
  return doc.dump(2) + "\n";
}

double wifi_power(double p, const WifiPowerParams& params) {
  if (!(p >= 0.0)) throw Error(ErrorCode::NegativeRate, "packet rate must be >= 0");
  if (p <= params.threshold_pps) return params.beta_low * p + params.base_low;
  return params.beta_high * p + params.base_high;
}

double cpu_power(double u, double freq_khz, const PowerModel& model) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw Error(ErrorCode::UtilizationOutOfRange, "utilization must lie in [0, 1]");
  }
  const CpuPowerBin& bin = model.nearest_bin(freq_khz);
  return bin.beta_active * u + bin.beta_idle;
}

double total_power(double p, double u, double freq_khz, const PowerModel& model) {
  return wifi_power(p, model.wifi) + cpu_power(u, freq_khz, model);
}

LinearFit fit_linear(std::span<const CalibrationSample> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error(ErrorCode::DegenerateDesign, "need at least two samples");
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = samples[i].x;
    y[i] = samples[i].y;
  }
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
    throw Error(ErrorCode::DegenerateDesign, "predictor is constant");
  }
  const double mx = simd::mean(x);
  const double my = simd::mean(y);
  const double sxx = simd::centered_dot(x, x, mx, mx);
  const double sxy = simd::centered_dot(x, y, mx, my);

  LinearFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;

  std::vector<double> residuals(n);
  for (std::size_t i = 0; i < n; ++i) residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
  const double mr = simd::mean(residuals);
  const double ss_dev = simd::centered_dot(residuals, residuals, mr, mr);
  fit.residual_stdev = std::sqrt(ss_dev / static_cast<double>(n - 1));

  if (n > 2) {
    const double s2 = simd::dot(residuals, residuals) / static_cast<double>(n - 2);
    fit.slope_stderr = std::sqrt(s2 / sxx);
    fit.intercept_stderr = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
  }
  return fit;
}

CpuPowerBin fit_cpu_bin(std::uint64_t freq_khz, std::span<const CalibrationSample> samples) {
  const LinearFit fit = fit_linear(samples);
  return {freq_khz, fit.slope, fit.intercept};
}

WifiPowerParams fit_wifi(double threshold_pps, std::span<const CalibrationSample> samples) {
  if (!(threshold_pps > 0.0)) malformed("threshold_pps must be positive");
  std::vector<CalibrationSample> low, high;
  for (const auto& s : samples) (s.x <= threshold_pps ? low : high).push_back(s);
  const LinearFit lo = fit_linear(low);
  const LinearFit hi = fit_linear(high);
  return {lo.slope, lo.intercept, hi.slope, hi.intercept, threshold_pps};
}

}  // namespace intelliad::power
