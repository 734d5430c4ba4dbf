#ifndef HYPERGP_KPMF_HPP
#define HYPERGP_KPMF_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hypergp/kernels.hpp"
#include "hypergp/types.hpp"

namespace hypergp {

struct RatingTriple {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Partially observed matrix as (row, col, value) triples; duplicate cells are
// rejected. Unobserved entries contribute nothing to the likelihood.
struct RatingsMatrix {
  int num_rows = 0;
  int num_cols = 0;
  std::vector<RatingTriple> observed;
};

RatingsMatrix make_ratings(int num_rows, int num_cols, std::vector<RatingTriple> observed);

struct FactorPair {
  Matrix u;  // N_U x D
  Matrix w;  // N_W x D
  double noise_variance = 1.0;

  int latent_dim() const { return static_cast<int>(u.cols()); }
};

// Nystrom approximation K ~ K_nz K_zz^{-1} K_zn of a gram matrix, with a
// small diagonal regulariser so the prior precision exists (the exact
// Nystrom matrix is rank-deficient). Solves go through Woodbury at
// O(N J^2).
struct SparseKernelApprox {
  IndexList inducing_indices;
  Matrix cross;           // K_nz, N x J
  Matrix inducing_chol;   // lower Cholesky factor of K_zz + jitter I
  double jitter = 0.0;
  double regulariser = 0.0;  // lambda on the diagonal of the approximation

  Eigen::Index size() const { return cross.rows(); }
  Matrix dense_approx() const;              // K_nz K_zz^{-1} K_zn (no regulariser)
  Matrix solve(const Matrix& rhs) const;    // (K~ + lambda I)^{-1} rhs
  double log_det() const;                   // log det(K~ + lambda I)
};

SparseKernelApprox nystrom_approx(const GramKernel& k, const IndexList& inducing);

// Column-prior handle used by the KPMF objective: either the dense gram or
// its Nystrom approximation.
class KpmfKernel {
 public:
  static KpmfKernel dense(const GramKernel& k);
  static KpmfKernel sparse(SparseKernelApprox approx);

  Eigen::Index size() const;
  Matrix solve(const Matrix& rhs) const;  // prior precision times rhs
  double log_det() const;
  bool is_sparse() const { return sparse_.has_value(); }

 private:
  KpmfKernel() = default;
  Matrix dense_;
  Matrix dense_chol_;
  double dense_log_det_ = 0.0;
  std::optional<SparseKernelApprox> sparse_;
};

// Masked-Gaussian log-likelihood plus the GP column priors, all normalising
// constants included so values are comparable across noise levels.
double kpmf_log_posterior(const RatingsMatrix& r, const FactorPair& fp, const KpmfKernel& k_u,
                          const KpmfKernel& k_w);

struct KpmfConfig {
  int steps = 500;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  bool optimise_noise = true;
  double init_scale = 0.1;     // factor entries start at N(0, init_scale^2)
  double init_noise = 1.0;
};

struct KpmfFitResult {
  FactorPair factors;
  std::vector<double> objective_trace;  // length steps + 1
};

KpmfFitResult kpmf_fit(const RatingsMatrix& r, int latent_dim, const KpmfKernel& k_u,
                       const KpmfKernel& k_w, const KpmfConfig& config);

// Inner products U_n . W_m per requested cell.
Vector kpmf_predict(const FactorPair& fp, const std::vector<std::pair<int, int>>& cells);

namespace detail {

struct KpmfGradients {
  double value = 0.0;
  Matrix d_u;
  Matrix d_w;
  double d_noise = 0.0;
};

KpmfGradients kpmf_log_posterior_with_gradients(const RatingsMatrix& r, const FactorPair& fp,
                                                const KpmfKernel& k_u, const KpmfKernel& k_w,
                                                bool want_gradients);

}  // namespace detail

}  // namespace hypergp

#endif
