#include "hypergp/errors.hpp"

namespace hypergp {

const char* errc_name(errc c) {
  switch (c) {
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::empty_hyperedge: return "EmptyHyperedge";
    case errc::duplicate_vertex_in_edge: return "DuplicateVertexInEdge";
    case errc::isolated_vertex: return "IsolatedVertex";
    case errc::non_positive_weight: return "NonPositiveWeight";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::eigen_solver_failure: return "EigenSolverFailure";
    case errc::non_positive_hyperparameter: return "NonPositiveHyperparameter";
    case errc::negative_bandwidth: return "NegativeBandwidth";
    case errc::duplicate_index: return "DuplicateIndex";
    case errc::singular_system: return "SingularSystem";
    case errc::non_finite_objective: return "NonFiniteObjective";
    case errc::power_iteration_no_convergence: return "PowerIterationNoConvergence";
    case errc::invalid_k: return "InvalidK";
    case errc::invalid_j: return "InvalidJ";
    case errc::invalid_q: return "InvalidQ";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::empty_input: return "EmptyInput";
    case errc::parse_error: return "ParseError";
    case errc::unknown_vertex_in_labels: return "UnknownVertexInLabels";
    case errc::duplicate_label: return "DuplicateLabel";
    case errc::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

}  // namespace hypergp
