#include "dhd/clustering.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include "dhd/errors.hpp"
#include "dhd/random.hpp"

namespace dhd {

namespace {

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

Matrix plus_plus_init(const Matrix& x, std::size_t k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Matrix centers(static_cast<Eigen::Index>(k), x.cols());
  Eigen::Index first = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
  centers.row(0) = x.row(first);

  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = squared_distance(x, i, centers, 0);

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    }
    const auto ci = static_cast<Eigen::Index>(c);
    centers.row(ci) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(x, i, centers, ci));
  }
  return centers;
}

// Returns whether any label changed; fills distances to the assigned centroid.
bool assign(const Matrix& x, const Matrix& centers, std::vector<int>& labels, std::vector<double>& dist,
            double& inertia) {
  bool changed = false;
  inertia = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double best_d = squared_distance(x, i, centers, 0);
    for (Eigen::Index c = 1; c < centers.rows(); ++c) {
      const double d = squared_distance(x, i, centers, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    if (labels[i] != best) {
      labels[i] = best;
      changed = true;
    }
    dist[i] = best_d;
    inertia += best_d;
  }
  return changed;
}

// Moves centroids to cluster means and repairs empty clusters. Returns the
// largest centroid shift.
double update(const Matrix& x, Matrix& centers, std::vector<int>& labels, std::vector<double>& dist) {
  const Eigen::Index k = centers.rows();
  Matrix sums = Matrix::Zero(k, x.cols());
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    sums.row(labels[i]) += x.row(i);
    ++counts[labels[i]];
  }

  for (Eigen::Index c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    Eigen::Index far = -1;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (counts[labels[i]] < 2) continue;
      if (far < 0 || dist[i] > dist[far]) far = i;
    }
    if (far < 0) break;  // cannot happen while |points| >= k
    const int from = labels[far];
    sums.row(from) -= x.row(far);
    --counts[from];
    sums.row(c) = x.row(far);
    counts[c] = 1;
    labels[far] = static_cast<int>(c);
    dist[far] = 0.0;
  }

  double shift = 0.0;
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::RowVectorXd next = sums.row(c) / static_cast<double>(counts[c]);
    shift = std::max(shift, (next - centers.row(c)).norm());
    centers.row(c) = next;
  }
  return shift;
}

ClusterAssignment lloyd(const Matrix& x, const KMeansConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  ClusterAssignment out;
  out.centroids = plus_plus_init(x, cfg.k, rng);
  out.labels.assign(static_cast<std::size_t>(x.rows()), -1);
  std::vector<double> dist(static_cast<std::size_t>(x.rows()));

  bool converged = false;
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const bool changed = assign(x, out.centroids, out.labels, dist, out.inertia);
    out.inertia_history.push_back(out.inertia);
    out.iterations_run = it + 1;
    if (!changed || converged || it + 1 == cfg.max_iters) break;

    double scale = 0.0;
    for (Eigen::Index c = 0; c < out.centroids.rows(); ++c) scale = std::max(scale, out.centroids.row(c).norm());
    const double shift = update(x, out.centroids, out.labels, dist);
    converged = shift <= cfg.tol * std::max(scale, std::numeric_limits<double>::min());
  }
  return out;
}

}  // namespace

ClusterAssignment kmeans(const Matrix& points, const KMeansConfig& cfg) {
  if (cfg.k < 1) throw DomainError("kmeans: k must be positive");
  if (static_cast<std::size_t>(points.rows()) < cfg.k) {
    throw DomainError("kmeans: " + std::to_string(points.rows()) + " points for k=" + std::to_string(cfg.k));
  }
  if (cfg.restarts < 1 || cfg.max_iters < 1) throw DomainError("kmeans: restarts and max_iters must be positive");

  Matrix normalized;
  if (cfg.normalize) {
    normalized = points;
    for (Eigen::Index r = 0; r < normalized.rows(); ++r) {
      const double n = normalized.row(r).norm();
      if (n == 0.0) throw DomainError("kmeans: cannot normalize zero vector at row " + std::to_string(r));
      normalized.row(r) /= n;
    }
  }
  const Matrix& x = cfg.normalize ? normalized : points;

  ClusterAssignment best;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    ClusterAssignment run = lloyd(x, cfg, cfg.seed + r);
    run.restart = r;
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

double alignment_accuracy(const std::vector<int>& labels, const std::vector<int>& truth) {
  if (labels.size() != truth.size()) throw DomainError("alignment_accuracy: length mismatch");
  if (labels.empty()) throw DomainError("alignment_accuracy: no points");
  std::size_t match = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if ((labels[i] != 0 && labels[i] != 1) || (truth[i] != 0 && truth[i] != 1)) {
      throw DomainError("alignment_accuracy: labels must be 0 or 1");
    }
    if (labels[i] == truth[i]) ++match;
  }
  return static_cast<double>(std::max(match, labels.size() - match)) / static_cast<double>(labels.size());
}

double purity(const std::vector<int>& labels, const std::vector<int>& truth) {
  if (labels.size() != truth.size()) throw DomainError("purity: length mismatch");
  if (labels.empty()) throw DomainError("purity: no points");
  std::map<int, std::map<int, std::size_t>> table;
  for (std::size_t i = 0; i < labels.size(); ++i) ++table[labels[i]][truth[i]];
  std::size_t majority_total = 0;
  for (const auto& [cluster, counts] : table) {
    std::size_t best = 0;
    for (const auto& [category, n] : counts) best = std::max(best, n);
    majority_total += best;
  }
  return static_cast<double>(majority_total) / static_cast<double>(labels.size());
}

}  // namespace dhd
