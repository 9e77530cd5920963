#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace intelliad::power {

// Units: milliwatts, packets per second, kHz. Utilization is a fraction.

/// Piecewise-linear WiFi model. Rates at or below the threshold use the low
/// branch.
struct WifiPowerParams {
  double beta_low = 0.0;   // mW per pps
  double base_low = 0.0;   // mW
  double beta_high = 0.0;  // mW per pps
  double base_high = 0.0;  // mW
  double threshold_pps = 1.0;
};

struct CpuPowerBin {
  std::uint64_t freq_khz = 0;
  double beta_active = 0.0;  // mW at full utilization, above idle
  double beta_idle = 0.0;    // mW
};

struct PowerModel {
  WifiPowerParams wifi;
  std::vector<CpuPowerBin> cpu_bins;  // strictly increasing freq_khz

  /// Throws MalformedPowerModel when an invariant does not hold.
  void validate() const;
  /// Bin whose frequency is closest to `freq_khz`; ties go to the lower bin.
  /// Throws NoFrequencyBin on an empty model.
  const CpuPowerBin& nearest_bin(double freq_khz) const;
};

PowerModel parse_power_model(std::string_view json_text);
PowerModel load_power_model(const std::filesystem::path& path);
std::string power_model_to_json(const PowerModel& model);

double wifi_power(double packet_rate_pps, const WifiPowerParams& params);
double cpu_power(double utilization, double freq_khz, const PowerModel& model);
/// Sum of the WiFi and CPU components.
double total_power(double packet_rate_pps, double utilization, double freq_khz,
                   const PowerModel& model);

struct CalibrationSample {
  double x;  // pps for WiFi, utilization for CPU
  double y;  // measured mW
};

struct LinearFit {
  double slope;
  double intercept;
  // Sample standard deviation (n - 1) of the residuals.
  double residual_stdev;
  // Standard errors of the coefficients (n - 2 dof); zero for two points.
  double slope_stderr;
  double intercept_stderr;
};

/// Ordinary least squares on (x, y). Needs two or more samples with
/// non-constant x, otherwise DegenerateDesign.
LinearFit fit_linear(std::span<const CalibrationSample> samples);

/// CPU bin from utilization/power samples recorded at one frequency.
CpuPowerBin fit_cpu_bin(std::uint64_t freq_khz, std::span<const CalibrationSample> samples);

/// Fits each WiFi branch on the samples that fall on its side of the
/// threshold.
WifiPowerParams fit_wifi(double threshold_pps, std::span<const CalibrationSample> samples);

}  // namespace intelliad::power
