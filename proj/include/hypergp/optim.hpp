#ifndef HYPERGP_OPTIM_HPP
#define HYPERGP_OPTIM_HPP

#include <cmath>

#include "hypergp/types.hpp"

namespace hypergp {

// Adaptive first-order ascent (Adam-style moment estimates). All fitting
// loops in the project share this single optimiser.
class AdamAscent {
 public:
  AdamAscent(Eigen::Index dim, double learning_rate)
      : lr_(learning_rate), m_(Vector::Zero(dim)), v_(Vector::Zero(dim)) {}

  void step(Vector& params, const Vector& grad) {
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.array().square().matrix();
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    params.array() += lr_ * (m_.array() / bc1) / ((v_.array() / bc2).sqrt() + eps_);
  }

 private:
  double lr_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  int t_ = 0;
  Vector m_, v_;
};

}  // namespace hypergp

#endif
