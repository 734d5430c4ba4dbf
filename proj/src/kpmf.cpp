#include "hypergp/kpmf.hpp"

#include <cmath>
#include <unordered_set>

#include "hypergp/errors.hpp"
#include "hypergp/numeric.hpp"
#include "hypergp/optim.hpp"
#include "hypergp/rng.hpp"

namespace hypergp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

}  // namespace

RatingsMatrix make_ratings(int num_rows, int num_cols, std::vector<RatingTriple> observed) {
  if (num_rows < 1 || num_cols < 1)
    throw ValidationError(errc::empty_input, "ratings matrix must have positive shape");
  std::unordered_set<long long> seen;
  for (const auto& t : observed) {
    if (t.row < 0 || t.row >= num_rows || t.col < 0 || t.col >= num_cols)
      throw ValidationError(errc::index_out_of_range,
                            "rating cell (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                ") out of range");
    if (!std::isfinite(t.value))
      throw ValidationError(errc::parse_error, "rating values must be finite");
    const long long key = static_cast<long long>(t.row) * num_cols + t.col;
    if (!seen.insert(key).second)
      throw ValidationError(errc::duplicate_index,
                            "rating cell (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                ") observed twice");
  }
  RatingsMatrix r;
  r.num_rows = num_rows;
  r.num_cols = num_cols;
  r.observed = std::move(observed);
  return r;
}

Matrix SparseKernelApprox::dense_approx() const {
  const Matrix t = inducing_chol.triangularView<Eigen::Lower>().solve(cross.transpose());
  return t.transpose() * t;
}

Matrix SparseKernelApprox::solve(const Matrix& rhs) const {
  const double lam = regulariser;
  Matrix inner = lam * inducing_chol * inducing_chol.transpose();
  inner.noalias() += cross.transpose() * cross;
  const Eigen::LLT<Matrix> llt = cholesky_with_jitter(inner);
  Matrix out = rhs;
  out.noalias() -= cross * llt.solve(cross.transpose() * rhs);
  return out / lam;
}

double SparseKernelApprox::log_det() const {
  const double lam = regulariser;
  const Eigen::Index n = cross.rows();
  const Eigen::Index jn = cross.cols();
  Matrix inner = lam * inducing_chol * inducing_chol.transpose();
  inner.noalias() += cross.transpose() * cross;
  const Eigen::LLT<Matrix> llt = cholesky_with_jitter(inner);
  const double log_det_m = 2.0 * inducing_chol.diagonal().array().log().sum();
  return static_cast<double>(n - jn) * std::log(lam) + log_det_from_llt(llt) - log_det_m;
}

SparseKernelApprox nystrom_approx(const GramKernel& k, const IndexList& inducing) {
  if (inducing.empty())
    throw ValidationError(errc::invalid_j, "need at least one inducing vertex");
  std::unordered_set<int> seen;
  for (int z : inducing) {
    if (z < 0 || z >= k.size())
      throw ValidationError(errc::index_out_of_range,
                            "inducing index " + std::to_string(z) + " out of range");
    if (!seen.insert(z).second)
      throw ValidationError(errc::duplicate_index,
                            "inducing index " + std::to_string(z) + " repeated");
  }
  SparseKernelApprox approx;
  approx.inducing_indices = inducing;
  approx.cross.resize(k.size(), static_cast<Eigen::Index>(inducing.size()));
  Matrix kzz(inducing.size(), inducing.size());
  for (std::size_t a = 0; a < inducing.size(); ++a) {
    approx.cross.col(static_cast<Eigen::Index>(a)) = k.matrix.col(inducing[a]);
    for (std::size_t b = 0; b < inducing.size(); ++b)
      kzz(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          k.matrix(inducing[a], inducing[b]);
  }
  double jitter = 0.0;
  Matrix shifted = kzz;
  // The inducing block is factored with the standard escalation; record what
  // was actually added because the approximation is defined through it.
  Eigen::LLT<Matrix> llt = cholesky_with_jitter(shifted, &jitter);
  if (jitter > 0.0) shifted.diagonal().array() += jitter;
  approx.inducing_chol = Matrix(llt.matrixL());
  approx.jitter = jitter;
  approx.regulariser = 1e-6 * k.matrix.diagonal().mean();
  return approx;
}

KpmfKernel KpmfKernel::dense(const GramKernel& k) {
  KpmfKernel handle;
  handle.dense_ = k.matrix;
  const Eigen::LLT<Matrix> llt = cholesky_with_jitter(k.matrix);
  handle.dense_chol_ = Matrix(llt.matrixL());
  handle.dense_log_det_ = log_det_from_llt(llt);
  return handle;
}

KpmfKernel KpmfKernel::sparse(SparseKernelApprox approx) {
  KpmfKernel handle;
  handle.sparse_ = std::move(approx);
  return handle;
}

Eigen::Index KpmfKernel::size() const {
  return sparse_ ? sparse_->size() : dense_.rows();
}

Matrix KpmfKernel::solve(const Matrix& rhs) const {
  if (sparse_) return sparse_->solve(rhs);
  Matrix out = dense_chol_.triangularView<Eigen::Lower>().solve(rhs);
  return dense_chol_.triangularView<Eigen::Lower>().transpose().solve(out);
}

double KpmfKernel::log_det() const {
  return sparse_ ? sparse_->log_det() : dense_log_det_;
}

namespace detail {

KpmfGradients kpmf_log_posterior_with_gradients(const RatingsMatrix& r, const FactorPair& fp,
                                                const KpmfKernel& k_u, const KpmfKernel& k_w,
                                                bool want_gradients) {
  if (fp.u.rows() != k_u.size() || fp.u.rows() != r.num_rows)
    throw ValidationError(errc::dimension_mismatch, "U, the row kernel and R disagree on N_U");
  if (fp.w.rows() != k_w.size() || fp.w.rows() != r.num_cols)
    throw ValidationError(errc::dimension_mismatch, "W, the column kernel and R disagree on N_W");
  if (fp.u.cols() != fp.w.cols())
    throw ValidationError(errc::dimension_mismatch, "U and W disagree on the latent dimension");
  if (!(fp.noise_variance > 0.0))
    throw ValidationError(errc::non_positive_hyperparameter, "noise variance must be positive");

  const double noise = fp.noise_variance;
  const double dim = static_cast<double>(fp.latent_dim());

  const Matrix ku_inv_u = k_u.solve(fp.u);
  const Matrix kw_inv_w = k_w.solve(fp.w);

  KpmfGradients out;
  out.value = -0.5 * fp.u.cwiseProduct(ku_inv_u).sum() - 0.5 * fp.w.cwiseProduct(kw_inv_w).sum();
  out.value += -0.5 * dim * (k_u.log_det() + static_cast<double>(r.num_rows) * kLog2Pi);
  out.value += -0.5 * dim * (k_w.log_det() + static_cast<double>(r.num_cols) * kLog2Pi);

  if (want_gradients) {
    out.d_u = -ku_inv_u;
    out.d_w = -kw_inv_w;
  }

  for (const auto& t : r.observed) {
    const double e = t.value - fp.u.row(t.row).dot(fp.w.row(t.col));
    out.value += -0.5 * (kLog2Pi + std::log(noise)) - e * e / (2.0 * noise);
    if (want_gradients) {
      out.d_u.row(t.row) += e / noise * fp.w.row(t.col);
      out.d_w.row(t.col) += e / noise * fp.u.row(t.row);
      out.d_noise += -0.5 / noise + e * e / (2.0 * noise * noise);
    }
  }
  return out;
}

}  // namespace detail

double kpmf_log_posterior(const RatingsMatrix& r, const FactorPair& fp, const KpmfKernel& k_u,
                          const KpmfKernel& k_w) {
  return detail::kpmf_log_posterior_with_gradients(r, fp, k_u, k_w, false).value;
}

KpmfFitResult kpmf_fit(const RatingsMatrix& r, int latent_dim, const KpmfKernel& k_u,
                       const KpmfKernel& k_w, const KpmfConfig& config) {
  if (latent_dim < 1)
    throw ValidationError(errc::invalid_q, "latent dimension must be >= 1");

  KpmfFitResult result;
  Rng rng(config.seed);
  result.factors.u.resize(r.num_rows, latent_dim);
  result.factors.w.resize(r.num_cols, latent_dim);
  for (Eigen::Index i = 0; i < result.factors.u.size(); ++i)
    result.factors.u(i % r.num_rows, i / r.num_rows) = config.init_scale * rng.normal();
  for (Eigen::Index i = 0; i < result.factors.w.size(); ++i)
    result.factors.w(i % r.num_cols, i / r.num_cols) = config.init_scale * rng.normal();
  result.factors.noise_variance = config.init_noise;

  const Eigen::Index nu = result.factors.u.size();
  const Eigen::Index nw = result.factors.w.size();
  const Eigen::Index total = nu + nw + (config.optimise_noise ? 1 : 0);
  Vector params(total);
  for (Eigen::Index i = 0; i < nu; ++i) params[i] = result.factors.u(i % r.num_rows, i / r.num_rows);
  for (Eigen::Index i = 0; i < nw; ++i)
    params[nu + i] = result.factors.w(i % r.num_cols, i / r.num_cols);
  if (config.optimise_noise) params[nu + nw] = softplus_inv(config.init_noise);

  const auto unpack = [&](const Vector& p, FactorPair& fp) {
    for (Eigen::Index i = 0; i < nu; ++i) fp.u(i % r.num_rows, i / r.num_rows) = p[i];
    for (Eigen::Index i = 0; i < nw; ++i) fp.w(i % r.num_cols, i / r.num_cols) = p[nu + i];
    if (config.optimise_noise) fp.noise_variance = softplus(p[nu + nw]);
  };

  AdamAscent adam(total, config.learning_rate);
  result.objective_trace.reserve(static_cast<std::size_t>(config.steps) + 1);
  for (int step = 0; step < config.steps; ++step) {
    unpack(params, result.factors);
    const auto eval =
        detail::kpmf_log_posterior_with_gradients(r, result.factors, k_u, k_w, true);
    if (!std::isfinite(eval.value))
      throw NumericalError(errc::non_finite_objective,
                           "objective became non-finite at step " + std::to_string(step));
    result.objective_trace.push_back(eval.value);
    Vector grad(total);
    for (Eigen::Index i = 0; i < nu; ++i) grad[i] = eval.d_u(i % r.num_rows, i / r.num_rows);
    for (Eigen::Index i = 0; i < nw; ++i) grad[nu + i] = eval.d_w(i % r.num_cols, i / r.num_cols);
    if (config.optimise_noise) grad[nu + nw] = eval.d_noise * sigmoid(params[nu + nw]);
    if (!grad.allFinite())
      throw NumericalError(errc::non_finite_objective,
                           "gradient became non-finite at step " + std::to_string(step));
    adam.step(params, grad);
  }
  unpack(params, result.factors);
  const double final_value = kpmf_log_posterior(r, result.factors, k_u, k_w);
  if (!std::isfinite(final_value))
    throw NumericalError(errc::non_finite_objective, "final objective is non-finite");
  result.objective_trace.push_back(final_value);
  return result;
}

Vector kpmf_predict(const FactorPair& fp, const std::vector<std::pair<int, int>>& cells) {
  Vector out(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto [row, col] = cells[i];
    if (row < 0 || row >= fp.u.rows() || col < 0 || col >= fp.w.rows())
      throw ValidationError(errc::index_out_of_range,
                            "cell (" + std::to_string(row) + ", " + std::to_string(col) +
                                ") out of range");
    out[static_cast<Eigen::Index>(i)] = fp.u.row(row).dot(fp.w.row(col));
  }
  return out;
}

}  // namespace hypergp
