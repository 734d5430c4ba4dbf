#ifndef HYPERGP_NUMERIC_HPP
#define HYPERGP_NUMERIC_HPP

#include <Eigen/Cholesky>
#include <cmath>

#include "hypergp/types.hpp"

namespace hypergp {

// softplus(x) = log(1 + exp(x)), evaluated without overflow.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Inverse of softplus for y > 0.
inline double softplus_inv(double y) {
  if (y > 30.0) return y;
  return std::log(std::expm1(y));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double log_sum_exp(const Vector& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

// Cholesky of a symmetric PSD matrix with the escalation policy: plain
// attempt, then jitter 1e-10 * mean(diag) growing tenfold up to
// 1e-6 * mean(diag). Throws NumericalError(singular_system) past that.
// On return `jitter_used` holds the diagonal shift that succeeded.
Eigen::LLT<Matrix> cholesky_with_jitter(const Matrix& a, double* jitter_used = nullptr);

// log det from a Cholesky factor.
inline double log_det_from_llt(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// FNV-1a, used to fingerprint run configurations in output artifacts.
std::uint64_t fnv1a64(const std::string& s);

// splitmix64-style combiner for deriving per-step and per-partition seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace hypergp

#endif
