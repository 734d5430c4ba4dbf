#ifndef HYPERGP_GP_HPP
#define HYPERGP_GP_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "hypergp/kernels.hpp"
#include "hypergp/types.hpp"

namespace hypergp {

struct GaussianLikelihood {
  double noise_variance = 1.0;
};

struct CategoricalLikelihood {
  int num_classes = 2;
  int mc_samples = 20;  // Monte-Carlo draws for the expected log-likelihood
};

using Likelihood = std::variant<GaussianLikelihood, CategoricalLikelihood>;

// Regression targets are reals, classification targets are class indices.
using Targets = std::variant<Vector, std::vector<int>>;

struct PredictiveDensity {
  Matrix mean;                  // n x C (C = 1 for regression)
  Matrix variance;              // n x C, clamped at 0
  Matrix class_probabilities;   // n x C for categorical predictions, else 0 x 0
  int variance_clamp_events = 0;
};

// Sparse variational posterior snapshot. The variational covariance is kept
// as one lower-triangular Cholesky factor per output; kernel hyperparameters
// live here so that a fitted state is self-contained.
struct SVGPState {
  IndexList inducing_indices;
  Matrix variational_mean;               // J x C
  std::vector<Matrix> variational_chol;  // C lower-triangular J x J factors
  KernelFamily kernel_family = KernelFamily::custom;
  std::vector<double> kernel_params;     // matern families: {nu, ell, variance}
  bool kernel_rescaled = true;
  double noise_variance = 1.0;           // Gaussian likelihood only

  int num_inducing() const { return static_cast<int>(inducing_indices.size()); }
  int num_outputs() const { return static_cast<int>(variational_mean.cols()); }
};

struct OptConfig {
  int steps = 1000;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  int batch_size = 0;  // 0 = full batch
  bool optimise_kernel = true;
  bool optimise_likelihood = true;
};

struct SvgpFitResult {
  SVGPState state;
  std::vector<double> elbo_trace;  // length steps + 1
};

// Conjugate GP regression posterior at the test vertices. With an empty
// training set this is the prior marginal.
PredictiveDensity exact_posterior(const GramKernel& k, const IndexList& train_idx,
                                  const Vector& y, const GaussianLikelihood& lik,
                                  const IndexList& test_idx);

// Variational evidence lower bound
//   sum_n E_q[log p(y_n | f_n)] - KL(q(u) || p(u)),   p(u) = N(0, K_zz).
// The Gaussian expectation is closed form; the categorical one is a seeded
// Monte-Carlo estimate, deterministic for a fixed seed.
double elbo(const SVGPState& state, const GramKernel& k, const IndexList& train_idx,
            const Targets& y, const Likelihood& lik, std::uint64_t mc_seed = 0);

// KL(q(u) || p(u)) summed over outputs, at the state's kernel parameters.
double svgp_kl(const SVGPState& state, const GramKernel& k);

SVGPState init_svgp_state(const GramKernel& k, const IndexList& inducing_indices,
                          const Likelihood& lik);

// Adam ascent on the ELBO over variational parameters and (optionally) kernel
// and likelihood parameters, all positives softplus-reparameterised.
// Deterministic for a fixed config.
SvgpFitResult fit_svgp(const GramKernel& k, const IndexList& train_idx, const Targets& y,
                       const Likelihood& lik, const IndexList& inducing_indices,
                       const OptConfig& config);

// q(f*) marginals via the conditional prior; categorical class probabilities
// are Monte-Carlo averages of the softmax over q(f*) samples.
PredictiveDensity predict_svgp(const SVGPState& state, const GramKernel& k,
                               const IndexList& test_idx, const Likelihood& lik,
                               std::uint64_t seed = 0);

// Mean per-point log predictive density. Categorical probabilities are
// clamped at 1e-12; `clamp_events` (when given) counts how often.
double log_predictive_density(const PredictiveDensity& pred, const Targets& y_true,
                              int* clamp_events = nullptr);

namespace detail {

// Value and constrained-space gradients of the ELBO; shared by the public
// elbo() and the fitting loop, so finite differences of the former validate
// the latter.
struct ElboGradients {
  double value = 0.0;
  Matrix d_mean;                 // J x C
  std::vector<Matrix> d_chol;    // lower-triangular parts only
  Vector d_kernel;               // w.r.t. constrained kernel params (may be empty)
  double d_noise = 0.0;          // w.r.t. noise variance (Gaussian only)
  int clamp_events = 0;
};

ElboGradients elbo_with_gradients(const SVGPState& state, const GramKernel& k,
                                  const IndexList& batch_idx, const Targets& y_batch,
                                  const Likelihood& lik, double data_scale,
                                  bool want_gradients, bool want_kernel_gradients,
                                  std::uint64_t mc_seed);

}  // namespace detail

}  // namespace hypergp

#endif
