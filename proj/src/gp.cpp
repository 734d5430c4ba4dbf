#include "hypergp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "hypergp/errors.hpp"
#include "hypergp/numeric.hpp"
#include "hypergp/optim.hpp"
#include "hypergp/rng.hpp"

namespace hypergp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

using hypergp::mix_seed;

Matrix rows_of(const Matrix& m, const IndexList& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  return out;
}

void check_indices(const IndexList& idx, Eigen::Index n, const char* what, bool distinct) {
  std::unordered_set<int> seen;
  for (int i : idx) {
    if (i < 0 || i >= n)
      throw ValidationError(errc::index_out_of_range,
                            std::string(what) + " index " + std::to_string(i) + " out of range");
    if (distinct && !seen.insert(i).second)
      throw ValidationError(errc::duplicate_index,
                            std::string(what) + " index " + std::to_string(i) + " repeated");
  }
}

int likelihood_outputs(const Likelihood& lik) {
  if (std::holds_alternative<GaussianLikelihood>(lik)) return 1;
  const auto& cat = std::get<CategoricalLikelihood>(lik);
  if (cat.num_classes < 2)
    throw ValidationError(errc::invalid_k, "categorical likelihood needs >= 2 classes");
  if (cat.mc_samples < 1)
    throw ValidationError(errc::empty_input, "categorical likelihood needs >= 1 MC sample");
  return cat.num_classes;
}

// Kernel blocks for the inducing set Z and a batch of vertices, either
// rebuilt from the cached spectrum at the state's hyperparameters or sliced
// from the dense gram when no spectrum is attached.
struct KernelBlocks {
  Matrix kzz;        // J x J
  Matrix kzb;        // J x B
  Vector kbb;        // diag, length B
  bool spectral = false;
  Matrix uz;         // J x N eigenvector rows at Z
  Matrix ub;         // B x N eigenvector rows at the batch
  Vector coeffs;     // spectral coefficients, length N
  Matrix coeff_jac;  // N x P derivative of coefficients w.r.t. kernel params
  int num_params = 0;
};

KernelBlocks make_blocks(const SVGPState& state, const GramKernel& k, const IndexList& batch,
                         bool want_kernel_grad) {
  KernelBlocks blocks;
  const bool matern_like =
      state.kernel_family == KernelFamily::matern || state.kernel_family == KernelFamily::graph_matern;
  const bool diffusion_like = state.kernel_family == KernelFamily::diffusion;
  if (k.spectrum && (matern_like || diffusion_like)) {
    blocks.spectral = true;
    const SymmetricSpectrum& s = *k.spectrum;
    if (matern_like) {
      if (state.kernel_params.size() != 3)
        throw ValidationError(errc::dimension_mismatch, "matern state needs 3 kernel params");
      MaternHyperparams hp{state.kernel_params[0], state.kernel_params[1], state.kernel_params[2]};
      if (want_kernel_grad) {
        matern_coefficients_grad(s.eigenvalues, hp, state.kernel_rescaled, blocks.coeffs,
                                 blocks.coeff_jac);
        blocks.num_params = 3;
      } else {
        blocks.coeffs = matern_coefficients(s.eigenvalues, hp, state.kernel_rescaled);
      }
    } else {
      if (state.kernel_params.size() != 1)
        throw ValidationError(errc::dimension_mismatch, "diffusion state needs 1 kernel param");
      blocks.coeffs = diffusion_coefficients(s.eigenvalues, state.kernel_params[0]);
      blocks.num_params = 0;  // beta stays fixed
    }
    blocks.uz = rows_of(s.eigenvectors, state.inducing_indices);
    blocks.ub = rows_of(s.eigenvectors, batch);
    const Matrix uz_scaled = blocks.uz * blocks.coeffs.asDiagonal();
    blocks.kzz.noalias() = uz_scaled * blocks.uz.transpose();
    blocks.kzz = 0.5 * (blocks.kzz + blocks.kzz.transpose()).eval();
    blocks.kzb.noalias() = uz_scaled * blocks.ub.transpose();
    blocks.kbb = (blocks.ub * blocks.coeffs.asDiagonal()).cwiseProduct(blocks.ub).rowwise().sum();
  } else {
    const Eigen::Index jn = static_cast<Eigen::Index>(state.inducing_indices.size());
    const Eigen::Index bn = static_cast<Eigen::Index>(batch.size());
    blocks.kzz.resize(jn, jn);
    for (Eigen::Index a = 0; a < jn; ++a)
      for (Eigen::Index b = 0; b < jn; ++b)
        blocks.kzz(a, b) = k.matrix(state.inducing_indices[static_cast<std::size_t>(a)],
                                    state.inducing_indices[static_cast<std::size_t>(b)]);
    blocks.kzb.resize(jn, bn);
    blocks.kbb.resize(bn);
    for (Eigen::Index b = 0; b < bn; ++b) {
      const int vb = batch[static_cast<std::size_t>(b)];
      blocks.kbb[b] = k.matrix(vb, vb);
      for (Eigen::Index a = 0; a < jn; ++a)
        blocks.kzb(a, b) = k.matrix(state.inducing_indices[static_cast<std::size_t>(a)], vb);
    }
  }
  return blocks;
}

Matrix lower_tri(const Matrix& m) {
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  out.triangularView<Eigen::Lower>() = m.triangularView<Eigen::Lower>();
  return out;
}

}  // namespace

namespace detail {

ElboGradients elbo_with_gradients(const SVGPState& state, const GramKernel& k,
                                  const IndexList& batch_idx, const Targets& y_batch,
                                  const Likelihood& lik, double data_scale,
                                  bool want_gradients, bool want_kernel_gradients,
                                  std::uint64_t mc_seed) {
  const int jn = state.num_inducing();
  const int cn = state.num_outputs();
  if (jn < 1) throw ValidationError(errc::invalid_j, "state has no inducing vertices");
  if (cn != likelihood_outputs(lik))
    throw ValidationError(errc::dimension_mismatch,
                          "state outputs do not match the likelihood");
  check_indices(state.inducing_indices, k.size(), "inducing", true);
  check_indices(batch_idx, k.size(), "batch", false);
  const Eigen::Index bn = static_cast<Eigen::Index>(batch_idx.size());

  KernelBlocks blocks = make_blocks(state, k, batch_idx, want_kernel_gradients);

  const Eigen::LLT<Matrix> llt = cholesky_with_jitter(blocks.kzz);
  const Matrix b_inv = llt.solve(Matrix::Identity(jn, jn));
  const double log_det_kzz = log_det_from_llt(llt);
  const Matrix a = llt.solve(blocks.kzb);  // J x B, columns a_n = Kzz^{-1} k_n

  ElboGradients out;
  out.d_mean = Matrix::Zero(jn, cn);
  out.d_chol.assign(static_cast<std::size_t>(cn), Matrix::Zero(jn, jn));

  // Marginals of q(f) per output.
  Matrix mu(bn, cn);
  Matrix s2(bn, cn);
  std::vector<Matrix> sa(static_cast<std::size_t>(cn));  // S_c * A per output
  const Vector kza_diag = blocks.kzb.cwiseProduct(a).colwise().sum().transpose();
  for (int c = 0; c < cn; ++c) {
    const Matrix& el = state.variational_chol[static_cast<std::size_t>(c)];
    mu.col(c) = a.transpose() * state.variational_mean.col(c);
    const Matrix p = el.transpose().triangularView<Eigen::Upper>() * a;
    s2.col(c) = blocks.kbb - kza_diag + p.cwiseProduct(p).colwise().sum().transpose();
    sa[static_cast<std::size_t>(c)] = el * p;  // L (L^T A) = S A
  }
  for (Eigen::Index n = 0; n < bn; ++n)
    for (int c = 0; c < cn; ++c) {
      if (s2(n, c) < 0.0) {
        ++out.clamp_events;
        s2(n, c) = 0.0;
      }
    }

  // Expected log-likelihood and its derivatives w.r.t. the q(f) marginals.
  double data_term = 0.0;
  Matrix g_mu = Matrix::Zero(bn, cn);
  Matrix g_s2 = Matrix::Zero(bn, cn);
  double d_noise = 0.0;

  if (std::holds_alternative<GaussianLikelihood>(lik)) {
    const Vector& y = std::get<Vector>(y_batch);
    if (y.size() != bn)
      throw ValidationError(errc::dimension_mismatch, "targets do not match the batch");
    const double noise = state.noise_variance;
    if (!(noise > 0.0))
      throw ValidationError(errc::non_positive_hyperparameter, "noise variance must be positive");
    for (Eigen::Index n = 0; n < bn; ++n) {
      const double r = y[n] - mu(n, 0);
      data_term += -0.5 * (kLog2Pi + std::log(noise)) - (r * r + s2(n, 0)) / (2.0 * noise);
      g_mu(n, 0) = r / noise;
      g_s2(n, 0) = -0.5 / noise;
      d_noise += -0.5 / noise + (r * r + s2(n, 0)) / (2.0 * noise * noise);
    }
  } else {
    const auto& cat = std::get<CategoricalLikelihood>(lik);
    const auto& labels = std::get<std::vector<int>>(y_batch);
    if (static_cast<Eigen::Index>(labels.size()) != bn)
      throw ValidationError(errc::dimension_mismatch, "targets do not match the batch");
    Rng rng(mc_seed);
    const int sn = cat.mc_samples;
    Vector f(cn), probs(cn), eps(cn);
    for (Eigen::Index n = 0; n < bn; ++n) {
      const int label = labels[static_cast<std::size_t>(n)];
      if (label < 0 || label >= cn)
        throw ValidationError(errc::index_out_of_range,
                              "class label " + std::to_string(label) + " out of range");
      for (int s = 0; s < sn; ++s) {
        for (int c = 0; c < cn; ++c) eps[c] = rng.normal();
        Vector sigma(cn);
        for (int c = 0; c < cn; ++c) sigma[c] = std::sqrt(std::max(s2(n, c), 1e-12));
        f = mu.row(n).transpose() + sigma.cwiseProduct(eps);
        const double lse = log_sum_exp(f);
        data_term += (f[label] - lse) / sn;
        probs = (f.array() - lse).exp();
        for (int c = 0; c < cn; ++c) {
          const double delta = (c == label) ? 1.0 : 0.0;
          g_mu(n, c) += (delta - probs[c]) / sn;
          g_s2(n, c) += (delta - probs[c]) * eps[c] / (2.0 * sigma[c] * sn);
        }
      }
    }
  }

  data_term *= data_scale;
  g_mu *= data_scale;
  g_s2 *= data_scale;
  d_noise *= data_scale;

  // KL(q(u) || p(u)) per output, p(u) = N(0, K_zz).
  double kl = 0.0;
  std::vector<Matrix> binv_m(static_cast<std::size_t>(cn));
  for (int c = 0; c < cn; ++c) {
    const Matrix& el = state.variational_chol[static_cast<std::size_t>(c)];
    const Vector m_c = state.variational_mean.col(c);
    const Matrix l_solved = llt.matrixL().solve(el);  // L_K^{-1} L_S
    const double trace_term = l_solved.squaredNorm();
    const Vector alpha = llt.matrixL().solve(m_c);
    const double log_det_s = 2.0 * el.diagonal().array().log().sum();
    kl += 0.5 * (trace_term + alpha.squaredNorm() - jn + log_det_kzz - log_det_s);
    binv_m[static_cast<std::size_t>(c)] = b_inv * m_c;
  }

  out.value = data_term - kl;
  if (!want_gradients) return out;

  // Gradients of the data term through the q(f) marginals, plus the KL.
  Matrix g_zz = Matrix::Zero(jn, jn);
  Matrix g_zb = Matrix::Zero(jn, bn);
  Vector g_bb = Vector::Zero(bn);
  const bool want_kernel = want_kernel_gradients && blocks.spectral && blocks.num_params > 0;

  for (int c = 0; c < cn; ++c) {
    const Matrix& el = state.variational_chol[static_cast<std::size_t>(c)];
    const Vector a_gmu = a * g_mu.col(c);
    const Matrix gs = a * g_s2.col(c).asDiagonal() * a.transpose();  // sum_n gv a_n a_n^T

    out.d_mean.col(c) = a_gmu - binv_m[static_cast<std::size_t>(c)];
    Matrix d_s = gs;  // dELBO/dS from the data term
    // KL part: dELBO/dS -= 0.5 (Kzz^{-1} - S^{-1})
    const Matrix linv_t =
        el.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(jn, jn));
    out.d_chol[static_cast<std::size_t>(c)] =
        lower_tri(2.0 * d_s * el - b_inv * el + linv_t);

    if (want_kernel) {
      const Matrix binv_sa = b_inv * sa[static_cast<std::size_t>(c)];  // Kzz^{-1} S A
      const Matrix s_c = el * el.transpose();
      // Data-term dependence on K_zz through a_n = Kzz^{-1} k_n.
      g_zz.noalias() -= a_gmu * binv_m[static_cast<std::size_t>(c)].transpose();
      g_zz += gs;
      const Matrix gs_sb = gs * s_c * b_inv;
      g_zz -= gs_sb + gs_sb.transpose();
      // KL dependence on K_zz.
      const Matrix binv_s_binv = b_inv * s_c * b_inv;
      g_zz -= 0.5 * (b_inv - binv_s_binv -
                     binv_m[static_cast<std::size_t>(c)] *
                         binv_m[static_cast<std::size_t>(c)].transpose());
      // Dependence on the cross block k_n.
      g_zb.noalias() += binv_m[static_cast<std::size_t>(c)] * g_mu.col(c).transpose();
      g_zb += (2.0 * (binv_sa - a)) * g_s2.col(c).asDiagonal();
    }
    g_bb += g_s2.col(c);
  }

  if (want_kernel) {
    // Contract the block gradients against dK/dtheta = U diag(dc) U^T.
    const Matrix y1 = g_zz * blocks.uz;                               // J x N
    Eigen::RowVectorXd w = blocks.uz.cwiseProduct(y1).colwise().sum();
    const Matrix y2 = g_zb * blocks.ub;                               // J x N
    w += blocks.uz.cwiseProduct(y2).colwise().sum();
    w += (g_bb.asDiagonal() * blocks.ub).cwiseProduct(blocks.ub).colwise().sum();
    out.d_kernel = (w * blocks.coeff_jac).transpose();
  }
  out.d_noise = d_noise;
  return out;
}

}  // namespace detail

double elbo(const SVGPState& state, const GramKernel& k, const IndexList& train_idx,
            const Targets& y, const Likelihood& lik, std::uint64_t mc_seed) {
  return detail::elbo_with_gradients(state, k, train_idx, y, lik, 1.0, false, false, mc_seed)
      .value;
}

double svgp_kl(const SVGPState& state, const GramKernel& k) {
  // Evaluate with an empty batch: the data term vanishes, leaving -KL.
  Targets empty;
  if (state.num_outputs() == 1)
    empty = Vector(0);
  else
    empty = std::vector<int>{};
  Likelihood lik;
  if (state.num_outputs() == 1)
    lik = GaussianLikelihood{state.noise_variance > 0 ? state.noise_variance : 1.0};
  else
    lik = CategoricalLikelihood{state.num_outputs(), 1};
  return -detail::elbo_with_gradients(state, k, {}, empty, lik, 1.0, false, false, 0).value;
}

SVGPState init_svgp_state(const GramKernel& k, const IndexList& inducing_indices,
                          const Likelihood& lik) {
  check_indices(inducing_indices, k.size(), "inducing", true);
  if (inducing_indices.empty())
    throw ValidationError(errc::invalid_j, "need at least one inducing vertex");
  SVGPState state;
  state.inducing_indices = inducing_indices;
  state.kernel_family = k.family;
  state.kernel_params = k.hyperparams;
  state.kernel_rescaled = k.rescaled;
  const int cn = likelihood_outputs(lik);
  const int jn = static_cast<int>(inducing_indices.size());
  state.variational_mean = Matrix::Zero(jn, cn);
  const Matrix kzz = gram_blocks(k, inducing_indices, inducing_indices);
  const Eigen::LLT<Matrix> llt = cholesky_with_jitter(kzz);
  const Matrix chol = llt.matrixL();
  state.variational_chol.assign(static_cast<std::size_t>(cn), chol);
  if (const auto* g = std::get_if<GaussianLikelihood>(&lik)) {
    if (!(g->noise_variance > 0.0))
      throw ValidationError(errc::non_positive_hyperparameter, "noise variance must be positive");
    state.noise_variance = g->noise_variance;
  }
  return state;
}

namespace {

// Flat parameter vector for the optimiser. Positive quantities (Cholesky
// diagonals, kernel hyperparameters, noise) ride through softplus.
struct ParamPacker {
  int jn, cn;
  bool with_kernel;
  int kernel_params;
  bool with_noise;

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(jn) * cn + cn * (jn * (jn + 1)) / 2 +
           (with_kernel ? kernel_params : 0) + (with_noise ? 1 : 0);
  }

  Vector pack(const SVGPState& s) const {
    Vector p(size());
    Eigen::Index at = 0;
    for (int c = 0; c < cn; ++c)
      for (int j = 0; j < jn; ++j) p[at++] = s.variational_mean(j, c);
    for (int c = 0; c < cn; ++c) {
      const Matrix& el = s.variational_chol[static_cast<std::size_t>(c)];
      for (int r = 0; r < jn; ++r)
        for (int q = 0; q <= r; ++q)
          p[at++] = (q == r) ? softplus_inv(std::max(el(r, q), 1e-12)) : el(r, q);
    }
    if (with_kernel)
      for (int i = 0; i < kernel_params; ++i) p[at++] = softplus_inv(s.kernel_params[static_cast<std::size_t>(i)]);
    if (with_noise) p[at++] = softplus_inv(s.noise_variance);
    return p;
  }

  void unpack(const Vector& p, SVGPState& s) const {
    Eigen::Index at = 0;
    for (int c = 0; c < cn; ++c)
      for (int j = 0; j < jn; ++j) s.variational_mean(j, c) = p[at++];
    for (int c = 0; c < cn; ++c) {
      Matrix& el = s.variational_chol[static_cast<std::size_t>(c)];
      for (int r = 0; r < jn; ++r)
        for (int q = 0; q <= r; ++q)
          el(r, q) = (q == r) ? softplus(p[at]) : p[at], ++at;
    }
    if (with_kernel)
      for (int i = 0; i < kernel_params; ++i) s.kernel_params[static_cast<std::size_t>(i)] = softplus(p[at++]);
    if (with_noise) s.noise_variance = softplus(p[at++]);
  }

  Vector pack_grad(const Vector& p, const detail::ElboGradients& g) const {
    Vector out(size());
    Eigen::Index at = 0;
    for (int c = 0; c < cn; ++c)
      for (int j = 0; j < jn; ++j) out[at++] = g.d_mean(j, c);
    for (int c = 0; c < cn; ++c) {
      const Matrix& dl = g.d_chol[static_cast<std::size_t>(c)];
      for (int r = 0; r < jn; ++r)
        for (int q = 0; q <= r; ++q) {
          out[at] = (q == r) ? dl(r, q) * sigmoid(p[at]) : dl(r, q);
          ++at;
        }
    }
    if (with_kernel)
      for (int i = 0; i < kernel_params; ++i) {
        out[at] = g.d_kernel[i] * sigmoid(p[at]);
        ++at;
      }
    if (with_noise) {
      out[at] = g.d_noise * sigmoid(p[at]);
      ++at;
    }
    return out;
  }
};

Targets subset_targets(const Targets& y, const std::vector<int>& positions) {
  if (const auto* v = std::get_if<Vector>(&y)) {
    Vector out(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t i = 0; i < positions.size(); ++i) out[static_cast<Eigen::Index>(i)] = (*v)[positions[i]];
    return out;
  }
  const auto& labels = std::get<std::vector<int>>(y);
  std::vector<int> out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) out[i] = labels[static_cast<std::size_t>(positions[i])];
  return out;
}

Eigen::Index targets_size(const Targets& y) {
  if (const auto* v = std::get_if<Vector>(&y)) return v->size();
  return static_cast<Eigen::Index>(std::get<std::vector<int>>(y).size());
}

}  // namespace

SvgpFitResult fit_svgp(const GramKernel& k, const IndexList& train_idx, const Targets& y,
                       const Likelihood& lik, const IndexList& inducing_indices,
                       const OptConfig& config) {
  if (targets_size(y) != static_cast<Eigen::Index>(train_idx.size()))
    throw ValidationError(errc::dimension_mismatch, "targets do not match training indices");

  SVGPState state = init_svgp_state(k, inducing_indices, lik);
  const bool matern_like =
      k.spectrum && (k.family == KernelFamily::matern || k.family == KernelFamily::graph_matern);

  ParamPacker packer;
  packer.jn = state.num_inducing();
  packer.cn = state.num_outputs();
  packer.with_kernel = config.optimise_kernel && matern_like;
  packer.kernel_params = packer.with_kernel ? 3 : 0;
  packer.with_noise =
      config.optimise_likelihood && std::holds_alternative<GaussianLikelihood>(lik);

  Vector params = packer.pack(state);
  AdamAscent adam(params.size(), config.learning_rate);

  const int n_train = static_cast<int>(train_idx.size());
  const bool minibatch = config.batch_size > 0 && config.batch_size < n_train;
  Rng batch_rng(mix_seed(config.seed, 0x6261746368ULL));
  std::vector<int> order(train_idx.size());
  for (int i = 0; i < n_train; ++i) order[static_cast<std::size_t>(i)] = i;

  SvgpFitResult result;
  result.elbo_trace.reserve(static_cast<std::size_t>(config.steps) + 1);

  for (int step = 0; step < config.steps; ++step) {
    packer.unpack(params, state);

    IndexList batch = train_idx;
    Targets y_batch = y;
    double scale = 1.0;
    if (minibatch) {
      batch_rng.shuffle(order);
      std::vector<int> positions(order.begin(), order.begin() + config.batch_size);
      batch.resize(static_cast<std::size_t>(config.batch_size));
      for (int i = 0; i < config.batch_size; ++i)
        batch[static_cast<std::size_t>(i)] = train_idx[static_cast<std::size_t>(positions[static_cast<std::size_t>(i)])];
      y_batch = subset_targets(y, positions);
      scale = static_cast<double>(n_train) / config.batch_size;
    }

    const auto eval = detail::elbo_with_gradients(state, k, batch, y_batch, lik, scale, true,
                                                  packer.with_kernel, mix_seed(config.seed, step));
    if (!std::isfinite(eval.value))
      throw NumericalError(errc::non_finite_objective,
                           "ELBO became non-finite at step " + std::to_string(step));
    // Record the full-data objective, not the minibatch estimate.
    const double trace_value =
        minibatch ? elbo(state, k, train_idx, y, lik, mix_seed(config.seed, step)) : eval.value;
    result.elbo_trace.push_back(trace_value);

    Vector grad = packer.pack_grad(params, eval);
    if (!grad.allFinite())
      throw NumericalError(errc::non_finite_objective,
                           "ELBO gradient became non-finite at step " + std::to_string(step));
    adam.step(params, grad);
  }

  packer.unpack(params, state);
  const double final_value = elbo(state, k, train_idx, y, lik, mix_seed(config.seed, config.steps));
  if (!std::isfinite(final_value))
    throw NumericalError(errc::non_finite_objective, "final ELBO is non-finite");
  result.elbo_trace.push_back(final_value);
  result.state = std::move(state);
  return result;
}

PredictiveDensity predict_svgp(const SVGPState& state, const GramKernel& k,
                               const IndexList& test_idx, const Likelihood& lik,
                               std::uint64_t seed) {
  const int cn = state.num_outputs();
  if (cn != likelihood_outputs(lik))
    throw ValidationError(errc::dimension_mismatch, "state outputs do not match the likelihood");
  check_indices(state.inducing_indices, k.size(), "inducing", true);
  check_indices(test_idx, k.size(), "test", false);

  KernelBlocks blocks = make_blocks(state, k, test_idx, false);
  const Eigen::LLT<Matrix> llt = cholesky_with_jitter(blocks.kzz);
  const Matrix a = llt.solve(blocks.kzb);
  const Eigen::Index tn = static_cast<Eigen::Index>(test_idx.size());

  PredictiveDensity pred;
  pred.mean.resize(tn, cn);
  pred.variance.resize(tn, cn);
  const Vector kza_diag = blocks.kzb.cwiseProduct(a).colwise().sum().transpose();
  for (int c = 0; c < cn; ++c) {
    const Matrix& el = state.variational_chol[static_cast<std::size_t>(c)];
    pred.mean.col(c) = a.transpose() * state.variational_mean.col(c);
    const Matrix p = el.transpose().triangularView<Eigen::Upper>() * a;
    pred.variance.col(c) =
        blocks.kbb - kza_diag + p.cwiseProduct(p).colwise().sum().transpose();
  }
  for (Eigen::Index n = 0; n < tn; ++n)
    for (int c = 0; c < cn; ++c)
      if (pred.variance(n, c) < 0.0) {
        ++pred.variance_clamp_events;
        pred.variance(n, c) = 0.0;
      }

  if (const auto* cat = std::get_if<CategoricalLikelihood>(&lik)) {
    pred.class_probabilities = Matrix::Zero(tn, cn);
    Rng rng(seed);
    Vector f(cn);
    for (Eigen::Index n = 0; n < tn; ++n) {
      for (int s = 0; s < cat->mc_samples; ++s) {
        for (int c = 0; c < cn; ++c)
          f[c] = pred.mean(n, c) + std::sqrt(pred.variance(n, c)) * rng.normal();
        const double lse = log_sum_exp(f);
        pred.class_probabilities.row(n) += ((f.array() - lse).exp() / cat->mc_samples).matrix().transpose();
      }
    }
  }
  return pred;
}

PredictiveDensity exact_posterior(const GramKernel& k, const IndexList& train_idx,
                                  const Vector& y, const GaussianLikelihood& lik,
                                  const IndexList& test_idx) {
  if (!(lik.noise_variance > 0.0))
    throw ValidationError(errc::non_positive_hyperparameter, "noise variance must be positive");
  check_indices(train_idx, k.size(), "train", false);
  check_indices(test_idx, k.size(), "test", false);
  if (y.size() != static_cast<Eigen::Index>(train_idx.size()))
    throw ValidationError(errc::dimension_mismatch, "targets do not match training indices");

  const Eigen::Index tn = static_cast<Eigen::Index>(test_idx.size());
  PredictiveDensity pred;
  pred.mean = Matrix::Zero(tn, 1);
  pred.variance.resize(tn, 1);
  for (Eigen::Index i = 0; i < tn; ++i) pred.variance(i, 0) = k.matrix(test_idx[static_cast<std::size_t>(i)], test_idx[static_cast<std::size_t>(i)]);
  if (train_idx.empty()) return pred;

  const Eigen::Index m = static_cast<Eigen::Index>(train_idx.size());
  Matrix ktt(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      ktt(a, b) = k.matrix(train_idx[static_cast<std::size_t>(a)], train_idx[static_cast<std::size_t>(b)]);
  ktt.diagonal().array() += lik.noise_variance;
  const Eigen::LLT<Matrix> llt = cholesky_with_jitter(ktt);

  Matrix kst(tn, m);
  for (Eigen::Index i = 0; i < tn; ++i)
    for (Eigen::Index a = 0; a < m; ++a)
      kst(i, a) = k.matrix(test_idx[static_cast<std::size_t>(i)], train_idx[static_cast<std::size_t>(a)]);

  pred.mean.col(0) = kst * llt.solve(y);
  const Matrix v = llt.matrixL().solve(kst.transpose());
  pred.variance.col(0) -= v.cwiseProduct(v).colwise().sum().transpose();
  for (Eigen::Index i = 0; i < tn; ++i)
    if (pred.variance(i, 0) < 0.0) {
      ++pred.variance_clamp_events;
      pred.variance(i, 0) = 0.0;
    }
  return pred;
}

double log_predictive_density(const PredictiveDensity& pred, const Targets& y_true,
                              int* clamp_events) {
  if (clamp_events) *clamp_events = 0;
  if (const auto* y = std::get_if<Vector>(&y_true)) {
    if (y->size() != pred.mean.rows())
      throw ValidationError(errc::dimension_mismatch, "targets do not match predictions");
    if (y->size() == 0) throw ValidationError(errc::empty_input, "no predictions to score");
    double total = 0.0;
    for (Eigen::Index n = 0; n < y->size(); ++n) {
      const double var = std::max(pred.variance(n, 0), 1e-12);
      const double r = (*y)[n] - pred.mean(n, 0);
      total += -0.5 * (kLog2Pi + std::log(var)) - r * r / (2.0 * var);
    }
    return total / static_cast<double>(y->size());
  }
  const auto& labels = std::get<std::vector<int>>(y_true);
  if (static_cast<Eigen::Index>(labels.size()) != pred.class_probabilities.rows())
    throw ValidationError(errc::dimension_mismatch, "targets do not match predictions");
  if (labels.empty()) throw ValidationError(errc::empty_input, "no predictions to score");
  double total = 0.0;
  for (std::size_t n = 0; n < labels.size(); ++n) {
    const int label = labels[n];
    if (label < 0 || label >= pred.class_probabilities.cols())
      throw ValidationError(errc::index_out_of_range, "class label out of range");
    double p = pred.class_probabilities(static_cast<Eigen::Index>(n), label);
    if (p < 1e-12) {
      p = 1e-12;
      if (clamp_events) ++*clamp_events;
    }
    total += std::log(p);
  }
  return total / static_cast<double>(labels.size());
}

}  // namespace hypergp
