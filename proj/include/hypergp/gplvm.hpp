#ifndef HYPERGP_GPLVM_HPP
#define HYPERGP_GPLVM_HPP

#include <cstdint>
#include <vector>

#include "hypergp/kernels.hpp"
#include "hypergp/types.hpp"

namespace hypergp {

struct SquaredExpParams {
  double lengthscale = 1.0;
  double variance = 1.0;
};

// Latent coordinates plus the Euclidean-kernel and noise hyperparameters they
// are scored under.
struct LatentConfiguration {
  Matrix coords;  // N x Q
  SquaredExpParams euclid;
  double noise_variance = 0.01;

  int latent_dim() const { return static_cast<int>(coords.cols()); }
};

Matrix squared_exponential_gram(const Matrix& coords, const SquaredExpParams& params);

// Hadamard product of the squared-exponential gram on the latent coordinates
// with the structural vertex kernel; PSD by the Schur product theorem.
GramKernel composite_gram(const LatentConfiguration& latent, const GramKernel& k_vv);

// Sum over the columns of H of the zero-mean Gaussian log density with shared
// covariance composite + noise * I, plus independent standard-normal log
// priors on every latent coordinate.
double gplvm_marginal_loglik(const LatentConfiguration& latent, const GramKernel& k_vv,
                             const Matrix& h);

struct GplvmConfig {
  int steps = 500;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  bool optimise_hyperparams = true;
  double init_jitter = 1e-3;
  double init_noise = 0.01;
  SquaredExpParams init_euclid{};
};

struct EmbeddingResult {
  LatentConfiguration latent;
  std::vector<double> objective_trace;  // length steps + 1
};

// MAP gradient ascent on the marginal log-likelihood over the latent
// coordinates (and optionally the Euclidean hyperparameters and noise),
// warm-started from the spectral embedding. The structural kernel stays
// fixed throughout.
EmbeddingResult fit_gplvm(const Matrix& h, const GramKernel& k_vv, int latent_dim,
                          const GplvmConfig& config);

// Eigenvectors of the Laplacian for the Q smallest nontrivial eigenvalues
// (the leading zero eigenvalue is skipped), sign-fixed, ascending order.
Matrix spectral_embedding(const Matrix& laplacian, int latent_dim);
Matrix spectral_embedding(const SymmetricSpectrum& spectrum, int latent_dim);

// The fit's warm start: spectral coordinates scaled to unit column variance
// with small seeded jitter.
Matrix gplvm_initial_coords(const GramKernel& k_vv, int latent_dim, std::uint64_t seed,
                            double jitter);

namespace detail {

struct GplvmGradients {
  double value = 0.0;
  Matrix d_coords;
  double d_lengthscale = 0.0;
  double d_variance = 0.0;
  double d_noise = 0.0;
};

GplvmGradients gplvm_loglik_with_gradients(const LatentConfiguration& latent,
                                           const GramKernel& k_vv, const Matrix& h,
                                           bool want_gradients);

}  // namespace detail

}  // namespace hypergp

#endif
