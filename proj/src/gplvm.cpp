#include "hypergp/gplvm.hpp"

#include <cmath>

#include "hypergp/errors.hpp"
#include "hypergp/numeric.hpp"
#include "hypergp/optim.hpp"
#include "hypergp/rng.hpp"

namespace hypergp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

Matrix squared_distances(const Matrix& coords) {
  const Vector sq = coords.rowwise().squaredNorm();
  Matrix d2 = sq.replicate(1, coords.rows()) + sq.transpose().replicate(coords.rows(), 1) -
              2.0 * coords * coords.transpose();
  return d2.cwiseMax(0.0);
}

}  // namespace

Matrix squared_exponential_gram(const Matrix& coords, const SquaredExpParams& params) {
  if (!(params.lengthscale > 0.0) || !(params.variance > 0.0))
    throw ValidationError(errc::non_positive_hyperparameter,
                          "squared-exponential hyperparameters must be positive");
  const Matrix d2 = squared_distances(coords);
  return params.variance *
         (-d2 / (2.0 * params.lengthscale * params.lengthscale)).array().exp().matrix();
}

GramKernel composite_gram(const LatentConfiguration& latent, const GramKernel& k_vv) {
  if (latent.coords.rows() != k_vv.size())
    throw ValidationError(errc::dimension_mismatch,
                          "latent coordinates and vertex kernel disagree on N");
  GramKernel k;
  k.matrix = squared_exponential_gram(latent.coords, latent.euclid).cwiseProduct(k_vv.matrix);
  k.family = KernelFamily::composite;
  k.hyperparams = {latent.euclid.lengthscale, latent.euclid.variance};
  k.rescaled = false;
  return k;
}

namespace detail {

GplvmGradients gplvm_loglik_with_gradients(const LatentConfiguration& latent,
                                           const GramKernel& k_vv, const Matrix& h,
                                           bool want_gradients) {
  const Eigen::Index n = k_vv.size();
  if (latent.coords.rows() != n)
    throw ValidationError(errc::dimension_mismatch,
                          "latent coordinates and vertex kernel disagree on N");
  if (h.rows() != n)
    throw ValidationError(errc::dimension_mismatch, "data matrix must have N rows");
  if (!(latent.noise_variance > 0.0))
    throw ValidationError(errc::non_positive_hyperparameter, "noise variance must be positive");
  const double ell = latent.euclid.lengthscale;
  const double var = latent.euclid.variance;
  if (!(ell > 0.0) || !(var > 0.0))
    throw ValidationError(errc::non_positive_hyperparameter,
                          "squared-exponential hyperparameters must be positive");

  const Eigen::Index m = h.cols();
  const Matrix d2 = squared_distances(latent.coords);
  const Matrix k_se = var * (-d2 / (2.0 * ell * ell)).array().exp().matrix();
  Matrix cov = k_se.cwiseProduct(k_vv.matrix);
  cov.diagonal().array() += latent.noise_variance;

  const Eigen::LLT<Matrix> llt = cholesky_with_jitter(cov);
  const double log_det = log_det_from_llt(llt);
  const Matrix alpha = llt.solve(h);  // Sigma^{-1} H

  GplvmGradients out;
  const double quad = (h.cwiseProduct(alpha)).sum();
  out.value = -0.5 * quad - 0.5 * static_cast<double>(m) * (log_det + n * kLog2Pi);
  // Independent standard-normal prior on every latent coordinate.
  out.value += -0.5 * latent.coords.squaredNorm() -
               0.5 * static_cast<double>(latent.coords.size()) * kLog2Pi;

  if (!want_gradients) return out;

  // d/dSigma of the data term: (Sigma^{-1} H H^T Sigma^{-1} - M Sigma^{-1}) / 2.
  const Matrix sigma_inv = llt.solve(Matrix::Identity(n, n));
  const Matrix g_sigma = 0.5 * (alpha * alpha.transpose() - static_cast<double>(m) * sigma_inv);

  const Matrix w = g_sigma.cwiseProduct(k_vv.matrix).cwiseProduct(k_se);
  out.d_coords = Matrix::Zero(n, latent.coords.cols());
  const Vector row_sums = w.rowwise().sum() + w.colwise().sum().transpose();
  // dK_se[i,j]/dx_i = -K_se[i,j] (x_i - x_j) / ell^2; both triangles contribute.
  out.d_coords = (-1.0 / (ell * ell)) *
                 (row_sums.asDiagonal() * latent.coords - (w + w.transpose()) * latent.coords);
  out.d_coords -= latent.coords;  // prior

  out.d_variance = w.sum() / var;
  out.d_lengthscale = w.cwiseProduct(d2).sum() / (ell * ell * ell);
  out.d_noise = g_sigma.trace();
  return out;
}

}  // namespace detail

double gplvm_marginal_loglik(const LatentConfiguration& latent, const GramKernel& k_vv,
                             const Matrix& h) {
  return detail::gplvm_loglik_with_gradients(latent, k_vv, h, false).value;
}

Matrix spectral_embedding(const SymmetricSpectrum& spectrum, int latent_dim) {
  const Eigen::Index n = spectrum.size();
  if (latent_dim < 1 || latent_dim > n - 1)
    throw ValidationError(errc::invalid_q, "latent dimension must lie in [1, N-1]");
  // Skip the leading zero eigenvalue; take the next Q eigenvectors.
  Matrix coords = spectrum.eigenvectors.middleCols(1, latent_dim);
  for (Eigen::Index c = 0; c < coords.cols(); ++c) {
    Eigen::Index arg = 0;
    coords.col(c).cwiseAbs().maxCoeff(&arg);
    if (coords(arg, c) < 0.0) coords.col(c) = -coords.col(c);
  }
  return coords;
}

Matrix spectral_embedding(const Matrix& laplacian, int latent_dim) {
  return spectral_embedding(eigendecompose(laplacian), latent_dim);
}

Matrix gplvm_initial_coords(const GramKernel& k_vv, int latent_dim, std::uint64_t seed,
                            double jitter) {
  const Eigen::Index n = k_vv.size();
  Rng rng(seed);
  Matrix coords;
  if (k_vv.spectrum) {
    coords = spectral_embedding(*k_vv.spectrum, latent_dim);
    for (Eigen::Index c = 0; c < coords.cols(); ++c) {
      const double mean = coords.col(c).mean();
      const double sd = std::sqrt((coords.col(c).array() - mean).square().mean());
      if (sd > 1e-12) coords.col(c) = (coords.col(c).array() - mean) / sd;
    }
  } else {
    coords.resize(n, latent_dim);
  }
  if (!k_vv.spectrum) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (int q = 0; q < latent_dim; ++q) coords(i, q) = rng.normal();
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      for (int q = 0; q < latent_dim; ++q) coords(i, q) += jitter * rng.normal();
  }
  return coords;
}

EmbeddingResult fit_gplvm(const Matrix& h, const GramKernel& k_vv, int latent_dim,
                          const GplvmConfig& config) {
  const Eigen::Index n = k_vv.size();
  if (latent_dim < 1 || latent_dim > n - 1)
    throw ValidationError(errc::invalid_q, "latent dimension must lie in [1, N-1]");

  EmbeddingResult result;
  result.latent.coords = gplvm_initial_coords(k_vv, latent_dim, config.seed, config.init_jitter);
  result.latent.euclid = config.init_euclid;
  result.latent.noise_variance = config.init_noise;

  const Eigen::Index n_coords = result.latent.coords.size();
  const Eigen::Index n_hyper = config.optimise_hyperparams ? 3 : 0;
  Vector params(n_coords + n_hyper);
  for (Eigen::Index i = 0; i < n_coords; ++i) params[i] = result.latent.coords(i % n, i / n);
  if (config.optimise_hyperparams) {
    params[n_coords + 0] = softplus_inv(result.latent.euclid.lengthscale);
    params[n_coords + 1] = softplus_inv(result.latent.euclid.variance);
    params[n_coords + 2] = softplus_inv(result.latent.noise_variance);
  }

  const auto unpack = [&](const Vector& p, LatentConfiguration& latent) {
    for (Eigen::Index i = 0; i < n_coords; ++i) latent.coords(i % n, i / n) = p[i];
    if (config.optimise_hyperparams) {
      latent.euclid.lengthscale = softplus(p[n_coords + 0]);
      latent.euclid.variance = softplus(p[n_coords + 1]);
      latent.noise_variance = softplus(p[n_coords + 2]);
    }
  };

  AdamAscent adam(params.size(), config.learning_rate);
  result.objective_trace.reserve(static_cast<std::size_t>(config.steps) + 1);
  for (int step = 0; step < config.steps; ++step) {
    unpack(params, result.latent);
    const auto eval = detail::gplvm_loglik_with_gradients(result.latent, k_vv, h, true);
    if (!std::isfinite(eval.value))
      throw NumericalError(errc::non_finite_objective,
                           "objective became non-finite at step " + std::to_string(step));
    result.objective_trace.push_back(eval.value);
    Vector grad(params.size());
    for (Eigen::Index i = 0; i < n_coords; ++i) grad[i] = eval.d_coords(i % n, i / n);
    if (config.optimise_hyperparams) {
      grad[n_coords + 0] = eval.d_lengthscale * sigmoid(params[n_coords + 0]);
      grad[n_coords + 1] = eval.d_variance * sigmoid(params[n_coords + 1]);
      grad[n_coords + 2] = eval.d_noise * sigmoid(params[n_coords + 2]);
    }
    if (!grad.allFinite())
      throw NumericalError(errc::non_finite_objective,
                           "gradient became non-finite at step " + std::to_string(step));
    adam.step(params, grad);
  }
  unpack(params, result.latent);
  const double final_value = gplvm_marginal_loglik(result.latent, k_vv, h);
  if (!std::isfinite(final_value))
    throw NumericalError(errc::non_finite_objective, "final objective is non-finite");
  result.objective_trace.push_back(final_value);
  return result;
}

}  // namespace hypergp
