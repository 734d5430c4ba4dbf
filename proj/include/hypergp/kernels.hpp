#ifndef HYPERGP_KERNELS_HPP
#define HYPERGP_KERNELS_HPP

#include <string>
#include <vector>

#include "hypergp/spectrum.hpp"
#include "hypergp/types.hpp"

namespace hypergp {

enum class KernelFamily { matern, diffusion, graph_matern, composite, custom };

std::string kernel_family_name(KernelFamily f);

struct MaternHyperparams {
  double nu = 1.5;
  double lengthscale = 5.0;
  double variance = 1.0;
};

// A positive semi-definite vertex covariance together with the spectrum that
// generated it. The spectrum is kept so hyperparameters can be re-applied
// cheaply (only the scalar map changes); it is null for grams loaded from
// disk or built ad hoc, in which case hyperparameter optimisation is off.
struct GramKernel {
  Matrix matrix;
  KernelFamily family = KernelFamily::custom;
  std::vector<double> hyperparams;  // matern/graph_matern: {nu, ell, variance}; diffusion: {beta}
  bool rescaled = true;             // unit-mean-diagonal convention applied
  SpectrumPtr spectrum;             // of the generating Laplacian, may be null

  Eigen::Index size() const { return matrix.rows(); }
};

// Spectral coefficients of the Matern map: variance * g / mean(g) with
// g(l) = (2 nu / ell^2 + l)^(-nu), eigenvalues clamped at zero from below.
// Without rescaling the coefficients are variance * g.
Vector matern_coefficients(const Vector& eigenvalues, const MaternHyperparams& hp,
                           bool rescale = true);

// Coefficients plus their derivatives w.r.t. (nu, lengthscale, variance);
// the Jacobian is N x 3 in that parameter order.
void matern_coefficients_grad(const Vector& eigenvalues, const MaternHyperparams& hp,
                              bool rescale, Vector& coeffs, Matrix& jacobian);

Vector diffusion_coefficients(const Vector& eigenvalues, double beta);

// Hypergraph Matern kernel: U diag(c) U^T over the Laplacian spectrum.
GramKernel matern_gram(const SpectrumPtr& laplacian_spectrum, const MaternHyperparams& hp,
                       bool rescale = true);

// Heat-kernel baseline exp(-beta Laplacian); beta is fixed, not optimised.
GramKernel diffusion_gram(const SpectrumPtr& laplacian_spectrum, double beta);

// Matern kernel over the symmetric normalized Laplacian of a plain graph
// given by its (weighted) adjacency matrix with zero diagonal.
GramKernel graph_matern_gram(const Matrix& adjacency, const MaternHyperparams& hp,
                             bool rescale = true);

// Submatrix extraction; indices must be in range and distinct per list.
Matrix gram_blocks(const GramKernel& k, const IndexList& rows, const IndexList& cols);

}  // namespace hypergp

#endif
