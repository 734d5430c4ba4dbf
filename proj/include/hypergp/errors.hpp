#ifndef HYPERGP_ERRORS_HPP
#define HYPERGP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hypergp {

enum class errc {
  index_out_of_range,
  empty_hyperedge,
  duplicate_vertex_in_edge,
  isolated_vertex,
  non_positive_weight,
  not_symmetric,
  eigen_solver_failure,
  non_positive_hyperparameter,
  negative_bandwidth,
  duplicate_index,
  singular_system,
  non_finite_objective,
  power_iteration_no_convergence,
  invalid_k,
  invalid_j,
  invalid_q,
  dimension_mismatch,
  empty_input,
  parse_error,
  unknown_vertex_in_labels,
  duplicate_label,
  io_failure,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

// Bad inputs: rejected up front, maps to CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Failures of the numerics themselves, maps to CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypergp

#endif
