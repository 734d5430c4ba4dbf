#ifndef HYPERGP_TYPES_HPP
#define HYPERGP_TYPES_HPP

#include <Eigen/Dense>
#include <vector>

namespace hypergp {

using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IndexList = std::vector<int>;

}  // namespace hypergp

#endif
