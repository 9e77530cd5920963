#pragma once

// Textbook reference formulas, written without the library's kernels, used
// as oracles by the unit and acceptance tests.

#include <cmath>
#include <vector>

namespace oracle {

inline double mean(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / v.size());
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const long double n = x.size();
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const long double mx = sx / n, my = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

inline double stdev(const std::vector<double>& v) {
  const long double m = mean(v);
  long double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return static_cast<double>(std::sqrt(ss / (v.size() - 1)));
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace oracle
