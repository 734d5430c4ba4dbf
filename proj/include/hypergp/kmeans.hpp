#ifndef HYPERGP_KMEANS_HPP
#define HYPERGP_KMEANS_HPP

#include <vector>

#include "hypergp/rng.hpp"
#include "hypergp/types.hpp"

namespace hypergp {

struct KMeansResult {
  std::vector<int> labels;  // length n, values in [0, k)
  Matrix centroids;         // k x d
  int iterations = 0;
};

// Lloyd iterations with k-means++ seeding. Deterministic for a given rng
// state; single run (no restarts), at most `max_iters` sweeps, convergence
// when no centroid moves more than `tol`. Empty clusters are refilled with
// the farthest point of the currently largest cluster.
KMeansResult kmeans(const Matrix& points, int k, Rng& rng, int max_iters = 300,
                    double tol = 1e-9);

}  // namespace hypergp

#endif
