#ifndef HYPERGP_SPECTRUM_HPP
#define HYPERGP_SPECTRUM_HPP

#include <memory>

#include "hypergp/types.hpp"

namespace hypergp {

// Eigendecomposition of a symmetric matrix: ascending eigenvalues, orthonormal
// eigenvectors as columns. Computed once per Laplacian and shared read-only;
// every kernel in the project is a scalar map over these eigenvalues.
struct SymmetricSpectrum {
  Vector eigenvalues;
  Matrix eigenvectors;

  Eigen::Index size() const { return eigenvalues.size(); }
  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

// Throws NotSymmetric if max|m - m^T| exceeds `symmetry_tol`, and
// EigenSolverFailure if the solver does not converge.
SymmetricSpectrum eigendecompose(const Matrix& m, double symmetry_tol = 1e-8);

using SpectrumPtr = std::shared_ptr<const SymmetricSpectrum>;

inline SpectrumPtr eigendecompose_shared(const Matrix& m, double symmetry_tol = 1e-8) {
  return std::make_shared<const SymmetricSpectrum>(eigendecompose(m, symmetry_tol));
}

}  // namespace hypergp

#endif
