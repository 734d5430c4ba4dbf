#include "hypergp/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include "hypergp/errors.hpp"

namespace hypergp {

SymmetricSpectrum eigendecompose(const Matrix& m, double symmetry_tol) {
  if (m.rows() != m.cols())
    throw ValidationError(errc::dimension_mismatch, "matrix must be square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > symmetry_tol)
    throw ValidationError(errc::not_symmetric,
                          "matrix is asymmetric by " + std::to_string(asym));

  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
  if (solver.info() != Eigen::Success)
    throw NumericalError(errc::eigen_solver_failure, "self-adjoint eigensolver did not converge");

  SymmetricSpectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  return s;
}

}  // namespace hypergp
