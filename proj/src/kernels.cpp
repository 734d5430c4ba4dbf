#include "hypergp/kernels.hpp"

#include <cmath>
#include <unordered_set>

#include "hypergp/errors.hpp"

namespace hypergp {

std::string kernel_family_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::matern: return "matern";
    case KernelFamily::diffusion: return "diffusion";
    case KernelFamily::graph_matern: return "graph_matern";
    case KernelFamily::composite: return "composite";
    case KernelFamily::custom: return "custom";
  }
  return "custom";
}

namespace {

void check_matern_params(const MaternHyperparams& hp) {
  if (!(hp.nu > 0.0) || !(hp.lengthscale > 0.0) || !(hp.variance > 0.0))
    throw ValidationError(errc::non_positive_hyperparameter,
                          "nu, lengthscale and variance must all be positive");
}

void check_spectrum_psd(const Vector& eigenvalues) {
  const double max_ev = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
  if (eigenvalues.minCoeff() < -1e-6 * max_ev)
    throw NumericalError(errc::eigen_solver_failure,
                         "spectrum has a structurally negative eigenvalue; input is not PSD");
}

Matrix spectral_map(const SymmetricSpectrum& s, const Vector& coeffs) {
  return s.eigenvectors * coeffs.asDiagonal() * s.eigenvectors.transpose();
}

}  // namespace

Vector matern_coefficients(const Vector& eigenvalues, const MaternHyperparams& hp, bool rescale) {
  check_matern_params(hp);
  const double shift = 2.0 * hp.nu / (hp.lengthscale * hp.lengthscale);
  Vector g(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lam = std::max(0.0, eigenvalues[i]);  // round-off negatives clamped
    g[i] = std::pow(shift + lam, -hp.nu);
  }
  if (rescale) {
    // mean(diag of U diag(g) U^T) == mean(g) for orthonormal U.
    g *= hp.variance / g.mean();
  } else {
    g *= hp.variance;
  }
  return g;
}

void matern_coefficients_grad(const Vector& eigenvalues, const MaternHyperparams& hp,
                              bool rescale, Vector& coeffs, Matrix& jacobian) {
  check_matern_params(hp);
  const Eigen::Index n = eigenvalues.size();
  const double nu = hp.nu;
  const double ell = hp.lengthscale;
  const double shift = 2.0 * nu / (ell * ell);

  Vector g(n), dg_dnu(n), dg_dell(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = std::max(0.0, eigenvalues[i]);
    const double s = shift + lam;
    const double gi = std::pow(s, -nu);
    g[i] = gi;
    dg_dnu[i] = gi * (-std::log(s) - 2.0 * nu / (ell * ell * s));
    dg_dell[i] = gi * 4.0 * nu * nu / (ell * ell * ell * s);
  }

  coeffs.resize(n);
  jacobian.resize(n, 3);
  if (rescale) {
    const double mean_g = g.mean();
    const double mean_dnu = dg_dnu.mean();
    const double mean_dell = dg_dell.mean();
    coeffs = hp.variance / mean_g * g;
    // d/dtheta [v g_i / mean(g)] = v (g_i' mean(g) - g_i mean(g')) / mean(g)^2
    jacobian.col(0) = hp.variance * (dg_dnu * mean_g - g * mean_dnu) / (mean_g * mean_g);
    jacobian.col(1) = hp.variance * (dg_dell * mean_g - g * mean_dell) / (mean_g * mean_g);
    jacobian.col(2) = g / mean_g;
  } else {
    coeffs = hp.variance * g;
    jacobian.col(0) = hp.variance * dg_dnu;
    jacobian.col(1) = hp.variance * dg_dell;
    jacobian.col(2) = g;
  }
}

Vector diffusion_coefficients(const Vector& eigenvalues, double beta) {
  if (beta < 0.0)
    throw ValidationError(errc::negative_bandwidth, "diffusion bandwidth beta must be >= 0");
  Vector g(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    g[i] = std::exp(-beta * std::max(0.0, eigenvalues[i]));
  return g;
}

GramKernel matern_gram(const SpectrumPtr& laplacian_spectrum, const MaternHyperparams& hp,
                       bool rescale) {
  check_spectrum_psd(laplacian_spectrum->eigenvalues);
  const Vector coeffs = matern_coefficients(laplacian_spectrum->eigenvalues, hp, rescale);
  GramKernel k;
  k.matrix = spectral_map(*laplacian_spectrum, coeffs);
  k.matrix = 0.5 * (k.matrix + k.matrix.transpose()).eval();
  k.family = KernelFamily::matern;
  k.hyperparams = {hp.nu, hp.lengthscale, hp.variance};
  k.rescaled = rescale;
  k.spectrum = laplacian_spectrum;
  return k;
}

GramKernel diffusion_gram(const SpectrumPtr& laplacian_spectrum, double beta) {
  check_spectrum_psd(laplacian_spectrum->eigenvalues);
  const Vector coeffs = diffusion_coefficients(laplacian_spectrum->eigenvalues, beta);
  GramKernel k;
  k.matrix = spectral_map(*laplacian_spectrum, coeffs);
  k.matrix = 0.5 * (k.matrix + k.matrix.transpose()).eval();
  k.family = KernelFamily::diffusion;
  k.hyperparams = {beta};
  k.rescaled = false;
  k.spectrum = laplacian_spectrum;
  return k;
}

GramKernel graph_matern_gram(const Matrix& adjacency, const MaternHyperparams& hp, bool rescale) {
  const Eigen::Index n = adjacency.rows();
  if (adjacency.cols() != n)
    throw ValidationError(errc::dimension_mismatch, "adjacency must be square");
  const double asym = (adjacency - adjacency.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8)
    throw ValidationError(errc::not_symmetric, "adjacency must be symmetric");
  if (adjacency.minCoeff() < 0.0)
    throw ValidationError(errc::not_symmetric, "adjacency must be nonnegative");
  if (adjacency.diagonal().cwiseAbs().maxCoeff() > 0.0)
    throw ValidationError(errc::not_symmetric, "adjacency must have a zero diagonal");
  const Vector degrees = adjacency.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(degrees[i] > 0.0))
      throw ValidationError(errc::isolated_vertex,
                            "vertex " + std::to_string(i) + " has degree zero");

  const Vector d_inv_sqrt = degrees.array().rsqrt();
  Matrix lap = Matrix::Identity(n, n);
  lap.noalias() -= d_inv_sqrt.asDiagonal() * adjacency * d_inv_sqrt.asDiagonal();
  lap = 0.5 * (lap + lap.transpose()).eval();

  GramKernel k = matern_gram(eigendecompose_shared(lap), hp, rescale);
  k.family = KernelFamily::graph_matern;
  return k;
}

Matrix gram_blocks(const GramKernel& k, const IndexList& rows, const IndexList& cols) {
  const auto check = [&](const IndexList& idx, const char* which) {
    std::unordered_set<int> seen;
    for (int i : idx) {
      if (i < 0 || i >= k.size())
        throw ValidationError(errc::index_out_of_range,
                              std::string(which) + " index " + std::to_string(i) + " out of range");
      if (!seen.insert(i).second)
        throw ValidationError(errc::duplicate_index,
                              std::string(which) + " index " + std::to_string(i) + " repeated");
    }
  };
  check(rows, "row");
  check(cols, "column");

  Matrix block(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          k.matrix(rows[r], cols[c]);
  return block;
}

}  // namespace hypergp
