#include "intelliad/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "intelliad/error.hpp"
#include "intelliad/simd/kernels.hpp"

namespace intelliad::analytics {

double fill_rate(const RevenueInputs& in) {
  if (!(in.ad_requests > 0.0)) throw Error(ErrorCode::ZeroRequests, "ad_requests must be positive");
  return in.impressions / in.ad_requests;
}

double ecpm(const RevenueInputs& in) {
  if (!(in.impressions > 0.0)) throw Error(ErrorCode::ZeroImpressions, "impressions must be positive");
  return in.total_earnings / in.impressions * 1000.0;
}

double ad_revenue(const RevenueInputs& in, double ecpm_value, double fill_rate_value) {
  return in.n_user * in.n_min * in.n_ad / 1000.0 * ecpm_value * fill_rate_value;
}

double traffic_dollar_cost(double bytes, const DataPlan& plan) {
  if (!(plan.quota_bytes > 0.0)) throw Error(ErrorCode::InvalidDataPlan, "quota must be positive");
  return bytes / plan.quota_bytes * plan.price;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "series lengths differ (" + std::to_string(x.size()) +
                                               " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw Error(ErrorCode::LengthMismatch, "need at least two points");
  const double mx = simd::mean(x);
  const double my = simd::mean(y);
  const double sxx = simd::centered_dot(x, x, mx, mx);
  const double syy = simd::centered_dot(y, y, my, my);
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorCode::ConstantSeries, "series is constant");
  const double r = simd::centered_dot(x, y, mx, my) / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double sample_stdev(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorCode::TooFewSchemes, "need at least two values");
  const double m = simd::mean(values);
  const double ss = simd::centered_dot(values, values, m, m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::map<std::string, double> scheme_stdev_summary(
    const std::map<std::string, std::vector<double>>& values_by_metric) {
  std::map<std::string, double> out;
  for (const auto& [metric, values] : values_by_metric) {
    if (values.size() < 2) {
      throw Error(ErrorCode::TooFewSchemes, metric + " has " + std::to_string(values.size()) +
                                                " scheme value(s)");
    }
    out[metric] = sample_stdev(values);
  }
  return out;
}

double correlate_cost_type(const std::vector<SchemeObservation>& observations,
                           reviews::CostType type) {
  std::vector<double> cost, rating;
  for (const auto& o : observations) {
    const auto c = o.cost.find(type);
    const auto r = o.rating.find(type);
    if (c == o.cost.end() || r == o.rating.end()) continue;
    cost.push_back(c->second);
    rating.push_back(r->second);
  }
  if (cost.size() < 2) {
    throw Error(ErrorCode::TooFewSchemes, std::string(reviews::to_string(type)) + " has " +
                                              std::to_string(cost.size()) + " usable scheme(s)");
  }
  return pearson(cost, rating);
}

std::map<reviews::CostType, double> correlate_costs_vs_ratings(
    const std::vector<SchemeObservation>& observations) {
  std::map<reviews::CostType, double> out;
  for (auto type : reviews::kAllCostTypes) out[type] = correlate_cost_type(observations, type);
  return out;
}

std::string format_fixed(double v, int decimals) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

double round_half_even(double v, int decimals) {
  return std::strtod(format_fixed(v, decimals).c_str(), nullptr);
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  out += '\n';
  return out;
}

}  // namespace intelliad::analytics
