#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intelliad/reviews.hpp"

namespace intelliad::analytics {

struct RevenueInputs {
  double impressions = 0.0;
  double ad_requests = 0.0;
  double total_earnings = 0.0;
  double n_user = 0.0;  // average daily sessions
  double n_min = 0.0;   // minutes per session
  double n_ad = 0.0;    // impressions per minute
};

/// impressions / ad_requests. Throws ZeroRequests.
double fill_rate(const RevenueInputs& in);

/// Earnings per 1000 impressions. Throws ZeroImpressions.
double ecpm(const RevenueInputs& in);

/// Daily revenue: (n_user * n_min * n_ad / 1000) * eCPM * fill rate.
double ad_revenue(const RevenueInputs& in, double ecpm_value, double fill_rate_value);

inline constexpr double kBytesPerGigabyte = 1024.0 * 1024.0 * 1024.0;

struct DataPlan {
  double price = 0.0;
  double quota_bytes = 0.0;

  static DataPlan gigabytes(double price, double gb) { return {price, gb * kBytesPerGigabyte}; }
};

/// Share of the plan's price spent on `bytes`. Throws InvalidDataPlan when
/// the quota is not positive.
double traffic_dollar_cost(double bytes, const DataPlan& plan);

/// Sample correlation coefficient. Throws LengthMismatch (sizes differ or
/// fewer than two points) and ConstantSeries.
double pearson(std::span<const double> x, std::span<const double> y);

/// Sample standard deviation (n - 1). Throws TooFewSchemes below two values.
double sample_stdev(std::span<const double> values);

/// metric -> stdev of its per-scheme values.
std::map<std::string, double> scheme_stdev_summary(
    const std::map<std::string, std::vector<double>>& values_by_metric);

struct SchemeObservation {
  std::string scheme;
  // Measured value per cost type: ad count for NumAds, CPU utilization for
  // MemCpu, total bytes for Traffic, power for Battery.
  std::map<reviews::CostType, double> cost;
  std::map<reviews::CostType, double> rating;
};

/// Pearson over the schemes that carry both a cost and a rating for `type`.
/// Throws TooFewSchemes when fewer than two schemes qualify.
double correlate_cost_type(const std::vector<SchemeObservation>& observations,
                           reviews::CostType type);

/// All four cost types; errors propagate.
std::map<reviews::CostType, double> correlate_costs_vs_ratings(
    const std::vector<SchemeObservation>& observations);

/// Fixed-point text with round-half-even on the exact binary value; "-0"
/// results print unsigned.
std::string format_fixed(double v, int decimals);

/// Value of format_fixed(v, decimals).
double round_half_even(double v, int decimals);

/// One CSV record with RFC 4180 quoting, newline-terminated.
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace intelliad::analytics
