#include <cmath>
#include <vector>

#include "doctest.h"

#include "intelliad/error.hpp"
#include "intelliad/power.hpp"
#include "intelliad/random.hpp"

using namespace intelliad;
using namespace intelliad::power;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an intelliad::Error");
  return ErrorCode::IoError;
}

PowerModel model() {
  PowerModel m;
  m.wifi = {2.0, 100.0, 1.0, 130.0, 20.0};
  m.cpu_bins = {{300000, 200.0, 20.0}, {600000, 400.0, 30.0}, {900000, 650.0, 45.0}};
  return m;
}

}  // namespace

TEST_SUITE("power") {

TEST_CASE("wifi branches") {
  const auto w = model().wifi;
  CHECK(wifi_power(0.0, w) == 100.0);
  CHECK(wifi_power(20.0, w) == 140.0);  // p == t takes the low branch
  CHECK(wifi_power(21.0, w) == 151.0);
  CHECK(code_of([&] { wifi_power(-1.0, w); }) == ErrorCode::NegativeRate);
}

TEST_CASE("cpu power uses the nearest bin") {
  const auto m = model();
  CHECK(cpu_power(0.5, 310000, m) == 120.0);
  CHECK(cpu_power(1.0, 1e7, m) == 695.0);
  CHECK(cpu_power(0.0, 450000, m) == 20.0);  // tie goes to the lower bin
  CHECK(code_of([&] { cpu_power(1.2, 300000, m); }) == ErrorCode::UtilizationOutOfRange);
  CHECK(code_of([&] { cpu_power(-0.1, 300000, m); }) == ErrorCode::UtilizationOutOfRange);
  PowerModel empty;
  CHECK(code_of([&] { cpu_power(0.5, 1, empty); }) == ErrorCode::NoFrequencyBin);
  CHECK(total_power(10.0, 0.5, 600000, m) == 120.0 + 230.0);
}

TEST_CASE("power model JSON") {
  const auto m = model();
  const auto again = parse_power_model(power_model_to_json(m));
  CHECK(power_model_to_json(again) == power_model_to_json(m));
  CHECK(code_of([] { parse_power_model("{}"); }) == ErrorCode::MalformedPowerModel);
  CHECK(code_of([] {
          parse_power_model(R"({"wifi":{"beta_low":1,"base_low":1,"beta_high":1,"base_high":1,
              "threshold_pps":5},"cpu_bins":[{"freq_khz":2,"beta_active":1,"beta_idle":1},
              {"freq_khz":1,"beta_active":1,"beta_idle":1}]})");
        }) == ErrorCode::MalformedPowerModel);
  CHECK(code_of([] { load_power_model("/nonexistent.json"); }) == ErrorCode::MalformedPowerModel);
}

TEST_CASE("shipped power model is valid") {
  const auto m = load_power_model(std::string(INTELLIAD_SOURCE_DIR) + "/data/power_model.json");
  CHECK(m.cpu_bins.size() >= 2);
}

TEST_CASE("OLS recovers noiseless lines") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = (rng.uniform() - 0.5) * 100.0;
    const double b = (rng.uniform() - 0.5) * 10.0;
    std::vector<CalibrationSample> s;
    for (int i = 0; i < 20; ++i) {
      const double x = rng.uniform() * 10.0;
      s.push_back({x, a + b * x});
    }
    const auto fit = fit_linear(s);
    CHECK(std::abs(fit.slope - b) < 1e-9);
    CHECK(std::abs(fit.intercept - a) < 1e-9);
    CHECK(fit.residual_stdev < 1e-9);
  }
}

TEST_CASE("OLS residuals are orthogonal to the predictor") {
  Rng rng(23);
  std::vector<CalibrationSample> s;
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform() * 50.0;
    s.push_back({x, 3.0 + 0.7 * x + 5.0 * rng.normal()});
  }
  const auto fit = fit_linear(s);
  double rx = 0.0, r1 = 0.0, scale = 0.0;
  for (const auto& p : s) {
    const double r = p.y - (fit.intercept + fit.slope * p.x);
    rx += r * p.x;
    r1 += r;
    scale += std::abs(p.y * p.x);
  }
  CHECK(std::abs(rx) / scale < 1e-9);
  CHECK(std::abs(r1) < 1e-9 * scale);
  CHECK(fit.slope_stderr > 0.0);
  CHECK(fit.intercept_stderr > 0.0);
  CHECK(fit.residual_stdev == doctest::Approx(5.0).epsilon(0.2));
}

TEST_CASE("two-point fit") {
  const std::vector<CalibrationSample> s{{0.0, 1.0}, {2.0, 5.0}};
  const auto fit = fit_linear(s);
  CHECK(fit.slope == 2.0);
  CHECK(fit.intercept == 1.0);
  CHECK(fit.slope_stderr == 0.0);
}

TEST_CASE("degenerate designs") {
  CHECK(code_of([] { fit_linear(std::vector<CalibrationSample>{{1.0, 2.0}}); }) ==
        ErrorCode::DegenerateDesign);
  CHECK(code_of([] { fit_linear(std::vector<CalibrationSample>{{1.0, 2.0}, {1.0, 3.0}}); }) ==
        ErrorCode::DegenerateDesign);
}

TEST_CASE("calibration fits") {
  std::vector<CalibrationSample> cpu{{0.1, 50.0}, {0.5, 150.0}, {0.9, 250.0}};
  const auto bin = fit_cpu_bin(800000, cpu);
  CHECK(bin.freq_khz == 800000);
  CHECK(bin.beta_active == doctest::Approx(250.0));
  CHECK(bin.beta_idle == doctest::Approx(25.0));

  std::vector<CalibrationSample> wifi;
  for (double p : {1.0, 5.0, 10.0, 20.0}) wifi.push_back({p, 2.0 * p + 100.0});
  for (double p : {25.0, 40.0, 80.0}) wifi.push_back({p, 1.0 * p + 130.0});
  const auto w = fit_wifi(20.0, wifi);
  CHECK(w.beta_low == doctest::Approx(2.0));
  CHECK(w.base_low == doctest::Approx(100.0));
  CHECK(w.beta_high == doctest::Approx(1.0));
  CHECK(w.base_high == doctest::Approx(130.0));
}

}
