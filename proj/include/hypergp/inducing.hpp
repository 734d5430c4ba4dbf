#ifndef HYPERGP_INDUCING_HPP
#define HYPERGP_INDUCING_HPP

#include <cstdint>
#include <vector>

#include "hypergp/spectrum.hpp"
#include "hypergp/types.hpp"

namespace hypergp {

// Per-vertex importance: dominant eigenvector of Q = A_v D_v^{-1}, sign-fixed
// nonnegative and rescaled so the largest entry is 1.
struct ImportanceScores {
  Vector gamma;
  double eigenvalue = 0.0;
  int iterations = 0;
};

ImportanceScores eigencentrality(const Matrix& vertex_adjacency, const Vector& vertex_degrees,
                                 int max_iterations = 10000, double tol = 1e-10);

struct ClusterAssignment {
  std::vector<int> labels;  // length N, values in [0, k)
  int k = 0;
  Matrix centroids;         // k x k in spectral coordinates
};

// k-means on the rows of the N x k matrix of eigenvectors for the k smallest
// Laplacian eigenvalues (eigenvector signs fixed for reproducibility).
ClusterAssignment spectral_clusters(const Matrix& laplacian, int k, std::uint64_t seed);
ClusterAssignment spectral_clusters(const SymmetricSpectrum& spectrum, int k, std::uint64_t seed);

struct InducingSet {
  IndexList indices;  // J distinct vertices, in selection order
  std::uint64_t seed = 0;
};

// Repeat J times: draw a cluster with probability proportional to its size,
// take its highest-importance unselected vertex; exhausted clusters drop out
// of the draw. Deterministic under the seed.
InducingSet select_inducing(const ImportanceScores& gamma, const ClusterAssignment& clusters,
                            int num_inducing, std::uint64_t seed);

// Conservative cluster-count default, k << J.
inline int default_cluster_count(int num_inducing) {
  return std::max(2, num_inducing / 4);
}

// Flip eigenvector columns so each one's largest-magnitude entry is positive.
Matrix sign_fixed_eigenvectors(const Matrix& eigenvectors);

}  // namespace hypergp

#endif
