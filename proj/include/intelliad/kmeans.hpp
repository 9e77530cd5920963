#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace intelliad::cluster {

using Point = std::vector<double>;

struct KMeansOptions {
  std::size_t max_iterations = 300;
  // Stop once no centroid moves farther than this (Euclidean).
  double tolerance = 1e-6;
};

struct KMeansResult {
  std::vector<std::size_t> assignment;
  std::vector<Point> centroids;
  // Within-cluster sum of squares after each Lloyd iteration.
  std::vector<double> wcss_history;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Lloyd's algorithm with k-means++ seeding. Points tie to the lower cluster
/// index. A cluster left empty takes the point farthest from its centroid.
/// Throws TooFewPoints when k == 0 or there are fewer than k points, and
/// DimensionMismatch for ragged input.
KMeansResult kmeans(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Sum of squared distances from each point to its assigned centroid.
double wcss(const std::vector<Point>& points, const std::vector<std::size_t>& assignment,
            const std::vector<Point>& centroids);

}  // namespace intelliad::cluster
