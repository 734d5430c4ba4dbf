#ifndef HYPERGP_IO_HPP
#define HYPERGP_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypergp/gp.hpp"
#include "hypergp/hypergraph.hpp"
#include "hypergp/inducing.hpp"
#include "hypergp/kernels.hpp"
#include "hypergp/kpmf.hpp"
#include "hypergp/types.hpp"

namespace hypergp {

struct NamedHypergraph {
  Hypergraph hypergraph;
  std::vector<std::string> names;  // vertex index -> external name
};

// A hypergraph with optional labels and a train/test split. Labels, when
// present, cover every vertex; the name map is a bijection.
struct Dataset {
  Hypergraph hypergraph;
  std::vector<std::string> vertex_names;
  std::vector<int> labels;               // empty when no labels were loaded
  std::vector<std::string> class_names;  // class id -> name, sorted
  std::vector<int> split;                // 0 = train, 1 = test; empty when unsplit
};

std::vector<std::string> default_vertex_names(int n);

// Text format: `N M` header, then one line per hyperedge holding an optional
// `w=<float>` token and whitespace-separated vertex names. `#` comments and
// blank lines are ignored. Writing also emits a `<path>.names.json` sidecar
// with the name -> index map.
NamedHypergraph load_hypergraph(const std::string& path);
void save_hypergraph(const std::string& path, const Hypergraph& g,
                     const std::vector<std::string>& names);

// Coordinate-list export: one `vertex_index edge_index` line per incidence.
void save_incidence_coords(const std::string& path, const Matrix& incidence);

// Label lines: `vertex_name<TAB>class_name`. Class ids are assigned in sorted
// class-name order. Every vertex must be covered exactly once.
void load_labels_into(Dataset& dataset, const std::string& path);
void save_labels(const std::string& path, const Dataset& dataset);

// Split lines: `vertex_name<TAB>{train|test}`.
void load_split_into(Dataset& dataset, const std::string& path);
void save_split(const std::string& path, const Dataset& dataset);

struct SplitConfig {
  double test_fraction = 0.25;
  std::uint64_t seed = 0;
};

// Seeded test assignment: stratified per class when labels are given,
// uniform otherwise. Returns 0/1 flags of length n.
std::vector<int> make_split(const std::vector<int>& labels, int n, double test_fraction,
                            std::uint64_t seed);

Dataset load_dataset(const std::string& hypergraph_path,
                     const std::optional<std::string>& labels_path, const SplitConfig& split);

// Attribute-table ingestion (UCI-Zoo style): comma-separated rows of
// `name,attr1,...,attrK`, one hyperedge per (attribute, value) pair. The
// label column (default: last) is pulled out as the class label.
Dataset load_attribute_table(const std::string& path, int label_column = -1);

// Rating triples `user item rating [timestamp]`, tab/comma/space separated,
// timestamps ignored. Users and items are re-indexed by first appearance.
struct RatingsTable {
  std::vector<std::string> user_names;
  std::vector<std::string> item_names;
  std::vector<RatingTriple> triples;  // indices into the name vectors
};

RatingsTable load_ratings(const std::string& path);

// Binary gram container: magic "HGPK", version, family tag, N, hyperparameter
// block, then row-major float64 entries. A `<path>.json` sidecar carries the
// same header as readable metadata.
void save_gram(const std::string& path, const GramKernel& k);
GramKernel load_gram(const std::string& path);

// SVGP checkpoint: `<base>.json` header plus `<base>.bin` payload holding the
// variational mean and Cholesky factors.
void save_svgp_checkpoint(const std::string& base_path, const SVGPState& state);
SVGPState load_svgp_checkpoint(const std::string& base_path);

// KPMF factors: `<base>.json` metadata plus `<base>.bin` with U then W.
void save_factors(const std::string& base_path, const FactorPair& fp);
FactorPair load_factors(const std::string& base_path);

// Embedding export: `name<TAB>coord...<TAB>[label]` per vertex.
void save_embedding(const std::string& path, const Matrix& coords,
                    const std::vector<std::string>& names,
                    const std::vector<std::string>* labels = nullptr);

// Two-column `step value` trace.
void save_trace(const std::string& path, const std::vector<double>& values);

void save_inducing_set(const std::string& path, const InducingSet& set, int cluster_count,
                       const Vector& gamma);

// Metric tables as a JSON envelope with a `conventions` sub-object and the
// seed/config fingerprint; keys serialise sorted so equal runs produce
// byte-identical files.
void save_results(const std::string& path, const std::map<std::string, double>& metrics,
                  const nlohmann::json& conventions, std::uint64_t seed,
                  const std::string& config_hash);

nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

}  // namespace hypergp

#endif
