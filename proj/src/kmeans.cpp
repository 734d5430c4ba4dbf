#include "hypergp/kmeans.hpp"

#include <limits>

#include "hypergp/errors.hpp"

namespace hypergp {

namespace {

// Squared Euclidean distance from every point to its nearest centroid.
void nearest_centroids(const Matrix& points, const Matrix& centroids, int k,
                       std::vector<int>& labels, Vector& dist2) {
  const Eigen::Index n = points.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int c = 0; c < k; ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        arg = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = arg;
    dist2[i] = best;
  }
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, Rng& rng, int max_iters, double tol) {
  const Eigen::Index n = points.rows();
  if (k < 1 || k > n)
    throw ValidationError(errc::invalid_k, "k must lie in [1, number of points]");

  Matrix centroids(k, points.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);

  // k-means++ seeding.
  int first = rng.uniform_int(static_cast<int>(n));
  centroids.row(0) = points.row(first);
  chosen[static_cast<std::size_t>(first)] = true;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  Vector dist2(n);
  for (int c = 1; c < k; ++c) {
    nearest_centroids(points, centroids, c, labels, dist2);
    double total = dist2.sum();
    int pick = -1;
    if (total > 0.0) {
      pick = rng.categorical(dist2);
    }
    if (pick < 0 || chosen[static_cast<std::size_t>(pick)]) {
      // All remaining mass sits on duplicates of chosen seeds; fall back to
      // a uniform draw over indices not yet used so we still produce k seeds.
      int offset = rng.uniform_int(static_cast<int>(n));
      for (Eigen::Index step = 0; step < n; ++step) {
        const int cand = static_cast<int>((offset + step) % n);
        if (!chosen[static_cast<std::size_t>(cand)]) {
          pick = cand;
          break;
        }
      }
    }
    centroids.row(c) = points.row(pick);
    chosen[static_cast<std::size_t>(pick)] = true;
  }

  KMeansResult result;
  result.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);

  for (int iter = 0; iter < max_iters; ++iter) {
    result.iterations = iter + 1;
    nearest_centroids(points, centroids, k, result.labels, dist2);

    // Refill empty clusters from the largest one.
    for (int c = 0; c < k; ++c) counts[static_cast<std::size_t>(c)] = 0;
    for (Eigen::Index i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(result.labels[static_cast<std::size_t>(i)])];
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      int largest = 0;
      for (int d = 1; d < k; ++d)
        if (counts[static_cast<std::size_t>(d)] > counts[static_cast<std::size_t>(largest)]) largest = d;
      double far = -1.0;
      Eigen::Index donor = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (result.labels[static_cast<std::size_t>(i)] != largest) continue;
        const double d = (points.row(i) - centroids.row(largest)).squaredNorm();
        if (d > far) {
          far = d;
          donor = i;
        }
      }
      result.labels[static_cast<std::size_t>(donor)] = c;
      --counts[static_cast<std::size_t>(largest)];
      ++counts[static_cast<std::size_t>(c)];
    }

    // Centroid update.
    Matrix updated = Matrix::Zero(k, points.cols());
    for (Eigen::Index i = 0; i < n; ++i)
      updated.row(result.labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (int c = 0; c < k; ++c) updated.row(c) /= std::max(1, counts[static_cast<std::size_t>(c)]);

    const double move = (updated - centroids).rowwise().norm().maxCoeff();
    centroids = updated;
    if (move <= tol) break;
  }

  result.centroids = centroids;
  return result;
}

}  // namespace hypergp
