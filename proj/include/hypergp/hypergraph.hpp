#ifndef HYPERGP_HYPERGRAPH_HPP
#define HYPERGP_HYPERGRAPH_HPP

#include <vector>

#include "hypergp/types.hpp"

namespace hypergp {

// A validated hypergraph: N vertices, M hyperedges (sets of vertex indices),
// strictly positive hyperedge weights. Validation guarantees every vertex is
// covered by at least one hyperedge so the degree matrices stay invertible.
// Immutable after construction.
class Hypergraph {
 public:
  Hypergraph(int num_vertices, std::vector<std::vector<int>> hyperedges,
             std::vector<double> weights = {});

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(hyperedges_.size()); }
  // Each hyperedge is stored sorted ascending.
  const std::vector<std::vector<int>>& hyperedges() const { return hyperedges_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  int num_vertices_;
  std::vector<std::vector<int>> hyperedges_;
  std::vector<double> weights_;
};

inline Hypergraph build_hypergraph(int num_vertices, std::vector<std::vector<int>> hyperedges,
                                   std::vector<double> weights = {}) {
  return Hypergraph(num_vertices, std::move(hyperedges), std::move(weights));
}

struct DegreeMatrices {
  Vector vertex_degrees;  // weighted: sum_e w(e) h(v, e)
  Vector edge_degrees;    // |e|
};

// N x M binary matrix, entry (j, i) = 1 iff vertex j belongs to hyperedge i.
Matrix incidence_matrix(const Hypergraph& g);

DegreeMatrices degree_matrices(const Hypergraph& g);

// Normalized hypergraph Laplacian
//   I - Dv^{-1/2} H W De^{-1} H^T Dv^{-1/2},
// symmetrised as (L + L^T)/2 to kill round-off asymmetry. Symmetric PSD with
// spectrum in [0, 1]; Dv^{1/2} 1 is always a 0-eigenvector.
Matrix laplacian(const Hypergraph& g);

// Hypergraph with incidence H^T: hyperedges become vertices and vice versa.
// Weights reset to 1.
Hypergraph dual(const Hypergraph& g);

enum class CliqueMode { weighted, binary };

// Graph reduction: weighted counts co-memberships, binary thresholds them.
// Diagonal is zero in both modes.
Matrix clique_expansion(const Matrix& incidence, CliqueMode mode);

// A_v = H H^T, diagonal (the vertex degrees) retained.
Matrix vertex_adjacency(const Matrix& incidence);

// Component id per vertex; ids are dense and ordered by first appearance.
std::vector<int> connected_components(const Hypergraph& g);

}  // namespace hypergp

#endif
