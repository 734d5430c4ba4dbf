#include "hypergp/inducing.hpp"

#include <algorithm>
#include <cmath>

#include "hypergp/errors.hpp"
#include "hypergp/kmeans.hpp"
#include "hypergp/rng.hpp"

namespace hypergp {

ImportanceScores eigencentrality(const Matrix& vertex_adjacency, const Vector& vertex_degrees,
                                 int max_iterations, double tol) {
  const Eigen::Index n = vertex_adjacency.rows();
  if (vertex_adjacency.cols() != n)
    throw ValidationError(errc::dimension_mismatch, "adjacency must be square");
  if (vertex_degrees.size() != n)
    throw ValidationError(errc::dimension_mismatch, "degree vector does not match adjacency");
  if (vertex_adjacency.minCoeff() < 0.0)
    throw ValidationError(errc::non_positive_weight, "adjacency must be nonnegative");
  if (vertex_degrees.minCoeff() <= 0.0)
    throw ValidationError(errc::non_positive_weight, "vertex degrees must be positive");

  const Vector inv_deg = vertex_degrees.cwiseInverse();
  // Power iteration on Q = A_v D_v^{-1} from the all-ones start.
  Vector x = Vector::Ones(n);
  ImportanceScores scores;
  for (int it = 0; it < max_iterations; ++it) {
    Vector y = vertex_adjacency * inv_deg.cwiseProduct(x);
    const double top = y.maxCoeff();
    if (!(top > 0.0))
      throw NumericalError(errc::power_iteration_no_convergence,
                           "power iteration collapsed to zero");
    y /= top;
    const double delta = (y - x).cwiseAbs().maxCoeff();
    x = y;
    scores.iterations = it + 1;
    if (delta <= tol) {
      scores.gamma = x.cwiseMax(0.0);
      const Vector qx = vertex_adjacency * inv_deg.cwiseProduct(scores.gamma);
      scores.eigenvalue = scores.gamma.dot(qx) / scores.gamma.squaredNorm();
      return scores;
    }
  }
  throw NumericalError(errc::power_iteration_no_convergence,
                       "power iteration did not converge in " + std::to_string(max_iterations) +
                           " iterations");
}

Matrix sign_fixed_eigenvectors(const Matrix& eigenvectors) {
  Matrix fixed = eigenvectors;
  for (Eigen::Index c = 0; c < fixed.cols(); ++c) {
    Eigen::Index arg = 0;
    fixed.col(c).cwiseAbs().maxCoeff(&arg);
    if (fixed(arg, c) < 0.0) fixed.col(c) = -fixed.col(c);
  }
  return fixed;
}

ClusterAssignment spectral_clusters(const SymmetricSpectrum& spectrum, int k, std::uint64_t seed) {
  const Eigen::Index n = spectrum.size();
  if (k < 1 || k > n)
    throw ValidationError(errc::invalid_k, "cluster count must lie in [1, N]");
  const Matrix coords = sign_fixed_eigenvectors(spectrum.eigenvectors.leftCols(k));
  Rng rng(seed);
  KMeansResult km = kmeans(coords, k, rng);
  ClusterAssignment assignment;
  assignment.labels = std::move(km.labels);
  assignment.k = k;
  assignment.centroids = std::move(km.centroids);
  return assignment;
}

ClusterAssignment spectral_clusters(const Matrix& laplacian, int k, std::uint64_t seed) {
  return spectral_clusters(eigendecompose(laplacian), k, seed);
}

InducingSet select_inducing(const ImportanceScores& gamma, const ClusterAssignment& clusters,
                            int num_inducing, std::uint64_t seed) {
  const Eigen::Index n = gamma.gamma.size();
  if (static_cast<Eigen::Index>(clusters.labels.size()) != n)
    throw ValidationError(errc::dimension_mismatch, "cluster labels do not match scores");
  if (num_inducing < 1 || num_inducing > n)
    throw ValidationError(errc::invalid_j, "J must lie in [1, N]");

  // Members per cluster, sorted by importance descending (index ascending on
  // ties) so argmax selection is a pop from the front.
  std::vector<std::vector<int>> members(static_cast<std::size_t>(clusters.k));
  for (Eigen::Index v = 0; v < n; ++v) {
    const int c = clusters.labels[static_cast<std::size_t>(v)];
    if (c < 0 || c >= clusters.k)
      throw ValidationError(errc::invalid_k, "cluster label out of range");
    members[static_cast<std::size_t>(c)].push_back(static_cast<int>(v));
  }
  for (auto& list : members)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      if (gamma.gamma[a] != gamma.gamma[b]) return gamma.gamma[a] > gamma.gamma[b];
      return a < b;
    });
  std::vector<std::size_t> cursor(static_cast<std::size_t>(clusters.k), 0);

  Rng rng(seed);
  InducingSet set;
  set.seed = seed;
  set.indices.reserve(static_cast<std::size_t>(num_inducing));
  Vector weights(clusters.k);
  while (static_cast<int>(set.indices.size()) < num_inducing) {
    // Cluster sizes stay the categorical weights; exhausted clusters drop out.
    for (int c = 0; c < clusters.k; ++c) {
      const auto& list = members[static_cast<std::size_t>(c)];
      weights[c] = cursor[static_cast<std::size_t>(c)] < list.size()
                       ? static_cast<double>(list.size())
                       : 0.0;
    }
    const int c = rng.categorical(weights);
    set.indices.push_back(members[static_cast<std::size_t>(c)][cursor[static_cast<std::size_t>(c)]++]);
  }
  return set;
}

}  // namespace hypergp
