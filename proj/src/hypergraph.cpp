#include "hypergp/hypergraph.hpp"

#include <algorithm>
#include <string>

#include "hypergp/errors.hpp"

namespace hypergp {

Hypergraph::Hypergraph(int num_vertices, std::vector<std::vector<int>> hyperedges,
                       std::vector<double> weights)
    : num_vertices_(num_vertices),
      hyperedges_(std::move(hyperedges)),
      weights_(std::move(weights)) {
  if (num_vertices_ < 1)
    throw ValidationError(errc::empty_input, "hypergraph needs at least one vertex");
  if (weights_.empty()) {
    weights_.assign(hyperedges_.size(), 1.0);
  } else if (weights_.size() != hyperedges_.size()) {
    throw ValidationError(errc::dimension_mismatch,
                          "expected one weight per hyperedge, got " +
                              std::to_string(weights_.size()) + " for " +
                              std::to_string(hyperedges_.size()) + " edges");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0))
      throw ValidationError(errc::non_positive_weight,
                            "weight of hyperedge " + std::to_string(i) + " must be positive");
  }

  std::vector<bool> covered(static_cast<std::size_t>(num_vertices_), false);
  for (std::size_t i = 0; i < hyperedges_.size(); ++i) {
    auto& edge = hyperedges_[i];
    if (edge.empty())
      throw ValidationError(errc::empty_hyperedge, "hyperedge " + std::to_string(i) + " is empty");
    std::sort(edge.begin(), edge.end());
    for (std::size_t j = 0; j < edge.size(); ++j) {
      const int v = edge[j];
      if (v < 0 || v >= num_vertices_)
        throw ValidationError(errc::index_out_of_range,
                              "hyperedge " + std::to_string(i) + " references vertex " +
                                  std::to_string(v) + " outside [0, " +
                                  std::to_string(num_vertices_) + ")");
      if (j > 0 && edge[j - 1] == v)
        throw ValidationError(errc::duplicate_vertex_in_edge,
                              "hyperedge " + std::to_string(i) + " repeats vertex " +
                                  std::to_string(v));
      covered[static_cast<std::size_t>(v)] = true;
    }
  }
  for (int v = 0; v < num_vertices_; ++v) {
    if (!covered[static_cast<std::size_t>(v)])
      throw ValidationError(errc::isolated_vertex,
                            "vertex " + std::to_string(v) + " belongs to no hyperedge");
  }
}

Matrix incidence_matrix(const Hypergraph& g) {
  Matrix h = Matrix::Zero(g.num_vertices(), g.num_edges());
  const auto& edges = g.hyperedges();
  for (int e = 0; e < g.num_edges(); ++e)
    for (int v : edges[static_cast<std::size_t>(e)]) h(v, e) = 1.0;
  return h;
}

DegreeMatrices degree_matrices(const Hypergraph& g) {
  DegreeMatrices d;
  d.vertex_degrees = Vector::Zero(g.num_vertices());
  d.edge_degrees = Vector::Zero(g.num_edges());
  const auto& edges = g.hyperedges();
  const auto& w = g.weights();
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& members = edges[static_cast<std::size_t>(e)];
    d.edge_degrees[e] = static_cast<double>(members.size());
    for (int v : members) d.vertex_degrees[v] += w[static_cast<std::size_t>(e)];
  }
  return d;
}

Matrix laplacian(const Hypergraph& g) {
  const Matrix h = incidence_matrix(g);
  const DegreeMatrices d = degree_matrices(g);
  const Vector dv_inv_sqrt = d.vertex_degrees.array().rsqrt();
  Vector w_over_de(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    w_over_de[e] = g.weights()[static_cast<std::size_t>(e)] / d.edge_degrees[e];

  const Matrix scaled = dv_inv_sqrt.asDiagonal() * h;  // Dv^{-1/2} H
  Matrix lap = Matrix::Identity(g.num_vertices(), g.num_vertices());
  lap.noalias() -= scaled * w_over_de.asDiagonal() * scaled.transpose();
  return 0.5 * (lap + lap.transpose());
}

Hypergraph dual(const Hypergraph& g) {
  // Dual edge i collects the original hyperedges containing vertex i.
  std::vector<std::vector<int>> dual_edges(static_cast<std::size_t>(g.num_vertices()));
  const auto& edges = g.hyperedges();
  for (int e = 0; e < g.num_edges(); ++e)
    for (int v : edges[static_cast<std::size_t>(e)])
      dual_edges[static_cast<std::size_t>(v)].push_back(e);
  return Hypergraph(g.num_edges(), std::move(dual_edges));
}

namespace {

void check_incidence(const Matrix& incidence) {
  for (Eigen::Index i = 0; i < incidence.rows(); ++i)
    for (Eigen::Index j = 0; j < incidence.cols(); ++j) {
      const double x = incidence(i, j);
      if (x != 0.0 && x != 1.0)
        throw ValidationError(errc::parse_error, "incidence matrix entries must be 0 or 1");
    }
}

}  // namespace

Matrix clique_expansion(const Matrix& incidence, CliqueMode mode) {
  check_incidence(incidence);
  Matrix a = incidence * incidence.transpose();
  a.diagonal().setZero();
  if (mode == CliqueMode::binary)
    a = (a.array() > 0.0).cast<double>().matrix();
  return a;
}

Matrix vertex_adjacency(const Matrix& incidence) {
  check_incidence(incidence);
  return incidence * incidence.transpose();
}

std::vector<int> connected_components(const Hypergraph& g) {
  std::vector<int> parent(static_cast<std::size_t>(g.num_vertices()));
  for (int v = 0; v < g.num_vertices(); ++v) parent[static_cast<std::size_t>(v)] = v;
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (const auto& edge : g.hyperedges())
    for (std::size_t j = 1; j < edge.size(); ++j) {
      const int a = find(edge[0]);
      const int b = find(edge[j]);
      if (a != b) parent[static_cast<std::size_t>(b)] = a;
    }
  std::vector<int> component(static_cast<std::size_t>(g.num_vertices()), -1);
  int next = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const int root = find(v);
    if (component[static_cast<std::size_t>(root)] < 0) component[static_cast<std::size_t>(root)] = next++;
    component[static_cast<std::size_t>(v)] = component[static_cast<std::size_t>(root)];
  }
  return component;
}

}  // namespace hypergp
