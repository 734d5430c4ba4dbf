#include "hypergp/numeric.hpp"

#include <string>

#include "hypergp/errors.hpp"

namespace hypergp {

Eigen::LLT<Matrix> cholesky_with_jitter(const Matrix& a, double* jitter_used) {
  const double mean_diag = a.diagonal().mean();
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    if (jitter_used) *jitter_used = 0.0;
    return llt;
  }
  const double scale = mean_diag > 0.0 ? mean_diag : 1.0;
  for (double jitter = 1e-10 * scale; jitter <= 1e-6 * scale * (1.0 + 1e-12); jitter *= 10.0) {
    Matrix shifted = a;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) {
      if (jitter_used) *jitter_used = jitter;
      return llt;
    }
  }
  throw NumericalError(errc::singular_system,
                       "Cholesky failed after jitter escalation to 1e-6 * mean diagonal");
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace hypergp
