#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dhd/embedding_store.hpp"

namespace dhd {

/// Seeded k-means settings. Restart r is initialized from seed + r and the
/// restart with the lowest inertia wins (ties: lowest r).
struct KMeansConfig {
  std::size_t k = 2;
  std::uint64_t seed = 42;
  std::size_t max_iters = 300;
  double tol = 1e-6;           // largest centroid shift relative to the largest centroid norm
  std::size_t restarts = 10;
  bool normalize = false;      // unit-normalize points before clustering
};

struct ClusterAssignment {
  std::vector<int> labels;
  Matrix centroids;              // k x d
  double inertia = 0.0;
  std::size_t iterations_run = 0;
  std::vector<double> inertia_history;  // after each assignment step of the winning restart
  std::size_t restart = 0;              // index of the winning restart
};

/// Lloyd's algorithm with k-means++ seeding. Empty clusters take the point
/// farthest from its current centroid. Throws DomainError if |points| < k.
ClusterAssignment kmeans(const Matrix& points, const KMeansConfig& cfg);

/// max(a, 1 - a) where a is the fraction of labels equal to truth; both are 0/1.
double alignment_accuracy(const std::vector<int>& labels, const std::vector<int>& truth);

/// Sum over clusters of the majority-category count, divided by the point count.
double purity(const std::vector<int>& labels, const std::vector<int>& truth);

}  // namespace dhd
