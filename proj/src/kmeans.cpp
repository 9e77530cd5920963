#include "intelliad/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intelliad/error.hpp"
#include "intelliad/random.hpp"
#include "intelliad/simd/kernels.hpp"

namespace intelliad::cluster {

namespace {

std::size_t nearest(const Point& p, const std::vector<Point>& centroids, double* dist = nullptr) {
  std::size_t best = 0;
  double best_d = simd::squared_distance(p, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = simd::squared_distance(p, centroids[c]);
    if (d < best_d) {
      best = c;
      best_d = d;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

std::vector<Point> seed_plus_plus(const std::vector<Point>& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<Point> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.below(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = simd::squared_distance(points[i], centroids[0]);

  while (centroids.size() < k) {
    const double total = simd::sum(d2);
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double run = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        run += d2[i];
        if (d2[i] > 0.0 && run > target) {
          pick = i;
          break;
        }
      }
      // Rounding can leave the target past the running sum; fall back to the
      // last point with positive weight.
      if (run <= target) {
        while (pick > 0 && d2[pick] == 0.0) --pick;
      }
    } else {
      pick = rng.below(n);
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], simd::squared_distance(points[i], centroids.back()));
    }
  }
  return centroids;
}

}  // namespace

double wcss(const std::vector<Point>& points, const std::vector<std::size_t>& assignment,
            const std::vector<Point>& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += simd::squared_distance(points[i], centroids[assignment[i]]);
  }
  return total;
}

KMeansResult kmeans(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k == 0) throw Error(ErrorCode::TooFewPoints, "k must be at least 1");
  if (points.size() < k) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(points.size()) + " points for k = " +
                                             std::to_string(k));
  }
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::DimensionMismatch, "points differ in dimension");
  }

  const std::size_t n = points.size();
  Rng rng(seed);
  KMeansResult result;
  result.centroids = seed_plus_plus(points, k, rng);
  result.assignment.assign(n, 0);

  std::vector<double> dist(n);
  std::vector<std::size_t> sizes(k);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      result.assignment[i] = nearest(points[i], result.centroids, &dist[i]);
      ++sizes[result.assignment[i]];
    }

    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[result.assignment[i]] < 2) continue;
        if (far == n || dist[i] > dist[far]) far = i;
      }
      --sizes[result.assignment[far]];
      result.assignment[far] = c;
      sizes[c] = 1;
      dist[far] = 0.0;
    }

    std::vector<Point> next(k, Point(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) simd::accumulate(next[result.assignment[i]], points[i]);
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      for (double& v : next[c]) v /= static_cast<double>(sizes[c]);
      shift = std::max(shift, std::sqrt(simd::squared_distance(next[c], result.centroids[c])));
    }
    result.centroids = std::move(next);
    result.wcss_history.push_back(wcss(points, result.assignment, result.centroids));
    result.iterations = iter + 1;
    if (shift < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace intelliad::cluster
