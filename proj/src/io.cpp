#include "hypergp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hypergp/errors.hpp"
#include "hypergp/rng.hpp"

namespace hypergp {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& message) {
  throw ValidationError(errc::parse_error, path + ":" + std::to_string(line) + ": " + message);
}

std::ifstream open_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(errc::parse_error, "cannot open " + path);
  return in;
}

std::ofstream create_text(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError(errc::io_failure, "cannot write " + path);
  return out;
}

// Content lines with their 1-based numbers; `#` comments and blanks dropped.
std::vector<std::pair<int, std::string>> content_lines(const std::string& path) {
  std::ifstream in = open_text(path);
  std::vector<std::pair<int, std::string>> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.emplace_back(number, raw);
  }
  return lines;
}

std::vector<std::string> split_tokens(const std::string& line, const char* extra_seps = "") {
  std::string normalized = line;
  for (char& c : normalized)
    if (std::strchr(extra_seps, c) != nullptr && c != '\0') c = ' ';
  std::istringstream ss(normalized);
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

double parse_double(const std::string& path, int line, const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) parse_fail(path, line, "trailing characters in number '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    parse_fail(path, line, "expected a number, got '" + tok + "'");
  } catch (const std::out_of_range&) {
    parse_fail(path, line, "number out of range: '" + tok + "'");
  }
}

long parse_int(const std::string& path, int line, const std::string& tok) {
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size()) parse_fail(path, line, "trailing characters in integer '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    parse_fail(path, line, "expected an integer, got '" + tok + "'");
  } catch (const std::out_of_range&) {
    parse_fail(path, line, "integer out of range: '" + tok + "'");
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_u64(std::ofstream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::ifstream& in, const std::string& path) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw ValidationError(errc::parse_error, path + ": truncated binary header");
  return v;
}

void write_doubles(std::ofstream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::ifstream& in, const std::string& path, double* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw ValidationError(errc::parse_error, path + ": truncated binary payload");
}

KernelFamily family_from_tag(std::uint64_t tag, const std::string& path) {
  switch (tag) {
    case 0: return KernelFamily::matern;
    case 1: return KernelFamily::diffusion;
    case 2: return KernelFamily::graph_matern;
    case 3: return KernelFamily::composite;
    case 4: return KernelFamily::custom;
    default: throw ValidationError(errc::parse_error, path + ": unknown kernel family tag");
  }
}

std::uint64_t family_tag(KernelFamily f) {
  switch (f) {
    case KernelFamily::matern: return 0;
    case KernelFamily::diffusion: return 1;
    case KernelFamily::graph_matern: return 2;
    case KernelFamily::composite: return 3;
    case KernelFamily::custom: return 4;
  }
  return 4;
}

}  // namespace

std::vector<std::string> default_vertex_names(int n) {
  std::vector<std::string> names(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) names[static_cast<std::size_t>(i)] = "v" + std::to_string(i);
  return names;
}

NamedHypergraph load_hypergraph(const std::string& path) {
  const auto lines = content_lines(path);
  if (lines.empty()) throw ValidationError(errc::parse_error, path + ": empty hypergraph file");

  const auto header = split_tokens(lines[0].second);
  if (header.size() != 2) parse_fail(path, lines[0].first, "header must be 'N M'");
  const long n = parse_int(path, lines[0].first, header[0]);
  const long m = parse_int(path, lines[0].first, header[1]);
  if (n < 1) parse_fail(path, lines[0].first, "vertex count must be positive");
  if (m < 0) parse_fail(path, lines[0].first, "edge count must be nonnegative");
  if (static_cast<long>(lines.size()) - 1 != m)
    parse_fail(path, lines[0].first,
               "header declares " + std::to_string(m) + " hyperedges but file has " +
                   std::to_string(lines.size() - 1));

  std::vector<std::string> names;
  std::unordered_map<std::string, int> index_of;
  std::vector<std::vector<int>> edges;
  std::vector<double> weights;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto [line_no, text] = lines[li];
    auto tokens = split_tokens(text);
    double weight = 1.0;
    std::size_t start = 0;
    if (!tokens.empty() && tokens[0].rfind("w=", 0) == 0) {
      weight = parse_double(path, line_no, tokens[0].substr(2));
      start = 1;
    }
    if (tokens.size() <= start) parse_fail(path, line_no, "hyperedge has no vertices");
    std::vector<int> edge;
    for (std::size_t t = start; t < tokens.size(); ++t) {
      auto it = index_of.find(tokens[t]);
      int idx;
      if (it == index_of.end()) {
        idx = static_cast<int>(names.size());
        if (idx >= n)
          parse_fail(path, line_no,
                     "vertex '" + tokens[t] + "' exceeds the declared count of " + std::to_string(n));
        index_of.emplace(tokens[t], idx);
        names.push_back(tokens[t]);
      } else {
        idx = it->second;
      }
      edge.push_back(idx);
    }
    edges.push_back(std::move(edge));
    weights.push_back(weight);
  }
  if (static_cast<long>(names.size()) != n)
    throw ValidationError(errc::parse_error,
                          path + ": header declares " + std::to_string(n) + " vertices but " +
                              std::to_string(names.size()) + " distinct names appear");

  return NamedHypergraph{Hypergraph(static_cast<int>(n), std::move(edges), std::move(weights)),
                         std::move(names)};
}

void save_hypergraph(const std::string& path, const Hypergraph& g,
                     const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != g.num_vertices())
    throw ValidationError(errc::dimension_mismatch, "names do not match vertex count");
  std::ofstream out = create_text(path);
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (int e = 0; e < g.num_edges(); ++e) {
    const double w = g.weights()[static_cast<std::size_t>(e)];
    if (w != 1.0) out << "w=" << format_double(w) << ' ';
    const auto& edge = g.hyperedges()[static_cast<std::size_t>(e)];
    for (std::size_t j = 0; j < edge.size(); ++j)
      out << names[static_cast<std::size_t>(edge[j])] << (j + 1 < edge.size() ? ' ' : '\n');
  }
  json sidecar;
  for (int v = 0; v < g.num_vertices(); ++v) sidecar[names[static_cast<std::size_t>(v)]] = v;
  save_json(path + ".names.json", sidecar);
}

void save_incidence_coords(const std::string& path, const Matrix& incidence) {
  std::ofstream out = create_text(path);
  for (Eigen::Index v = 0; v < incidence.rows(); ++v)
    for (Eigen::Index e = 0; e < incidence.cols(); ++e)
      if (incidence(v, e) != 0.0) out << v << ' ' << e << '\n';
}

void load_labels_into(Dataset& dataset, const std::string& path) {
  const auto lines = content_lines(path);
  std::unordered_map<std::string, int> index_of;
  for (int v = 0; v < dataset.hypergraph.num_vertices(); ++v)
    index_of[dataset.vertex_names[static_cast<std::size_t>(v)]] = v;

  std::vector<std::string> raw(static_cast<std::size_t>(dataset.hypergraph.num_vertices()));
  std::vector<bool> seen(raw.size(), false);
  for (const auto& [line_no, text] : lines) {
    const auto tokens = split_tokens(text);
    if (tokens.size() != 2) parse_fail(path, line_no, "expected 'vertex_name class_name'");
    const auto it = index_of.find(tokens[0]);
    if (it == index_of.end())
      throw ValidationError(errc::unknown_vertex_in_labels,
                            path + ":" + std::to_string(line_no) + ": vertex '" + tokens[0] +
                                "' is not in the hypergraph");
    if (seen[static_cast<std::size_t>(it->second)])
      throw ValidationError(errc::duplicate_label,
                            path + ":" + std::to_string(line_no) + ": vertex '" + tokens[0] +
                                "' labeled twice");
    seen[static_cast<std::size_t>(it->second)] = true;
    raw[static_cast<std::size_t>(it->second)] = tokens[1];
  }
  for (int v = 0; v < dataset.hypergraph.num_vertices(); ++v)
    if (!seen[static_cast<std::size_t>(v)])
      throw ValidationError(errc::unknown_vertex_in_labels,
                            path + ": vertex '" + dataset.vertex_names[static_cast<std::size_t>(v)] +
                                "' has no label");

  std::vector<std::string> classes = raw;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  dataset.class_names = classes;
  dataset.labels.resize(raw.size());
  for (std::size_t v = 0; v < raw.size(); ++v)
    dataset.labels[v] = static_cast<int>(
        std::lower_bound(classes.begin(), classes.end(), raw[v]) - classes.begin());
}

void save_labels(const std::string& path, const Dataset& dataset) {
  if (dataset.labels.empty())
    throw ValidationError(errc::empty_input, "dataset has no labels to save");
  std::ofstream out = create_text(path);
  for (int v = 0; v < dataset.hypergraph.num_vertices(); ++v)
    out << dataset.vertex_names[static_cast<std::size_t>(v)] << '\t'
        << dataset.class_names[static_cast<std::size_t>(dataset.labels[static_cast<std::size_t>(v)])]
        << '\n';
}

void load_split_into(Dataset& dataset, const std::string& path) {
  const auto lines = content_lines(path);
  std::unordered_map<std::string, int> index_of;
  for (int v = 0; v < dataset.hypergraph.num_vertices(); ++v)
    index_of[dataset.vertex_names[static_cast<std::size_t>(v)]] = v;
  std::vector<int> split(static_cast<std::size_t>(dataset.hypergraph.num_vertices()), -1);
  for (const auto& [line_no, text] : lines) {
    const auto tokens = split_tokens(text);
    if (tokens.size() != 2) parse_fail(path, line_no, "expected 'vertex_name train|test'");
    const auto it = index_of.find(tokens[0]);
    if (it == index_of.end())
      throw ValidationError(errc::unknown_vertex_in_labels,
                            path + ":" + std::to_string(line_no) + ": vertex '" + tokens[0] +
                                "' is not in the hypergraph");
    if (tokens[1] != "train" && tokens[1] != "test")
      parse_fail(path, line_no, "split must be 'train' or 'test'");
    if (split[static_cast<std::size_t>(it->second)] >= 0)
      throw ValidationError(errc::duplicate_label,
                            path + ":" + std::to_string(line_no) + ": vertex '" + tokens[0] +
                                "' assigned twice");
    split[static_cast<std::size_t>(it->second)] = tokens[1] == "test" ? 1 : 0;
  }
  for (int v = 0; v < dataset.hypergraph.num_vertices(); ++v)
    if (split[static_cast<std::size_t>(v)] < 0)
      throw ValidationError(errc::unknown_vertex_in_labels,
                            path + ": vertex '" + dataset.vertex_names[static_cast<std::size_t>(v)] +
                                "' has no split assignment");
  dataset.split = std::move(split);
}

void save_split(const std::string& path, const Dataset& dataset) {
  if (dataset.split.empty())
    throw ValidationError(errc::empty_input, "dataset has no split to save");
  std::ofstream out = create_text(path);
  for (int v = 0; v < dataset.hypergraph.num_vertices(); ++v)
    out << dataset.vertex_names[static_cast<std::size_t>(v)] << '\t'
        << (dataset.split[static_cast<std::size_t>(v)] == 1 ? "test" : "train") << '\n';
}

std::vector<int> make_split(const std::vector<int>& labels, int n, double test_fraction,
                            std::uint64_t seed) {
  if (test_fraction < 0.0 || test_fraction > 1.0)
    throw ValidationError(errc::parse_error, "test fraction must lie in [0, 1]");
  std::vector<int> split(static_cast<std::size_t>(n), 0);
  Rng rng(seed);
  if (labels.empty()) {
    std::vector<int> order = rng.permutation(n);
    const int take = static_cast<int>(std::llround(test_fraction * n));
    for (int i = 0; i < take; ++i) split[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
    return split;
  }
  if (static_cast<int>(labels.size()) != n)
    throw ValidationError(errc::dimension_mismatch, "labels do not match vertex count");
  const int classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  for (int c = 0; c < classes; ++c) {
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
      if (labels[static_cast<std::size_t>(v)] == c) members.push_back(v);
    rng.shuffle(members);
    const int take = std::min<int>(static_cast<int>(members.size()),
                                   static_cast<int>(std::llround(test_fraction * members.size())));
    for (int i = 0; i < take; ++i) split[static_cast<std::size_t>(members[static_cast<std::size_t>(i)])] = 1;
  }
  return split;
}

Dataset load_dataset(const std::string& hypergraph_path,
                     const std::optional<std::string>& labels_path, const SplitConfig& split) {
  NamedHypergraph named = load_hypergraph(hypergraph_path);
  Dataset dataset{std::move(named.hypergraph), std::move(named.names), {}, {}, {}};
  if (labels_path) load_labels_into(dataset, *labels_path);
  dataset.split = make_split(dataset.labels, dataset.hypergraph.num_vertices(),
                             split.test_fraction, split.seed);
  return dataset;
}

Dataset load_attribute_table(const std::string& path, int label_column) {
  const auto lines = content_lines(path);
  if (lines.empty()) throw ValidationError(errc::parse_error, path + ": empty attribute table");

  std::vector<std::string> names;
  std::vector<std::vector<std::string>> rows;
  for (const auto& [line_no, text] : lines) {
    const auto tokens = split_tokens(text, ",");
    if (tokens.size() < 2) parse_fail(path, line_no, "expected 'name,attr1,...'");
    if (!rows.empty() && tokens.size() != rows.back().size() + 1)
      parse_fail(path, line_no, "inconsistent column count");
    names.push_back(tokens[0]);
    rows.emplace_back(tokens.begin() + 1, tokens.end());
  }
  const int n = static_cast<int>(rows.size());
  const int cols = static_cast<int>(rows[0].size());
  if (label_column < 0) label_column = cols - 1;
  if (label_column >= cols)
    throw ValidationError(errc::parse_error, path + ": label column out of range");

  std::vector<std::vector<int>> edges;
  for (int c = 0; c < cols; ++c) {
    if (c == label_column) continue;
    std::map<std::string, std::vector<int>> groups;
    for (int v = 0; v < n; ++v) groups[rows[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)]].push_back(v);
    for (auto& [value, members] : groups) edges.push_back(std::move(members));
  }

  Dataset dataset{Hypergraph(n, std::move(edges)), std::move(names), {}, {}, {}};
  std::vector<std::string> raw(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) raw[static_cast<std::size_t>(v)] = rows[static_cast<std::size_t>(v)][static_cast<std::size_t>(label_column)];
  std::vector<std::string> classes = raw;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  dataset.class_names = classes;
  dataset.labels.resize(raw.size());
  for (std::size_t v = 0; v < raw.size(); ++v)
    dataset.labels[v] = static_cast<int>(
        std::lower_bound(classes.begin(), classes.end(), raw[v]) - classes.begin());
  return dataset;
}

RatingsTable load_ratings(const std::string& path) {
  const auto lines = content_lines(path);
  RatingsTable table;
  std::unordered_map<std::string, int> user_of, item_of;
  for (const auto& [line_no, text] : lines) {
    const auto tokens = split_tokens(text, ",");
    if (tokens.size() != 3 && tokens.size() != 4)
      parse_fail(path, line_no, "expected 'user item rating [timestamp]'");
    const auto uid = user_of.emplace(tokens[0], static_cast<int>(table.user_names.size()));
    if (uid.second) table.user_names.push_back(tokens[0]);
    const auto iid = item_of.emplace(tokens[1], static_cast<int>(table.item_names.size()));
    if (iid.second) table.item_names.push_back(tokens[1]);
    table.triples.push_back(
        RatingTriple{uid.first->second, iid.first->second, parse_double(path, line_no, tokens[2])});
  }
  return table;
}

void save_gram(const std::string& path, const GramKernel& k) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(errc::io_failure, "cannot write " + path);
  out.write("HGPK", 4);
  write_u64(out, 1);  // version
  write_u64(out, family_tag(k.family));
  write_u64(out, static_cast<std::uint64_t>(k.size()));
  write_u64(out, static_cast<std::uint64_t>(k.hyperparams.size()));
  if (!k.hyperparams.empty()) write_doubles(out, k.hyperparams.data(), k.hyperparams.size());
  // Row-major entries.
  for (Eigen::Index r = 0; r < k.size(); ++r)
    for (Eigen::Index c = 0; c < k.size(); ++c) {
      const double v = k.matrix(r, c);
      write_doubles(out, &v, 1);
    }
  if (!out) throw ValidationError(errc::io_failure, "failed writing " + path);

  json meta;
  meta["family"] = kernel_family_name(k.family);
  meta["n"] = k.size();
  meta["hyperparams"] = k.hyperparams;
  meta["rescaled"] = k.rescaled;
  save_json(path + ".json", meta);
}

GramKernel load_gram(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(errc::parse_error, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HGPK", 4) != 0)
    throw ValidationError(errc::parse_error, path + ": not a gram container");
  const std::uint64_t version = read_u64(in, path);
  if (version != 1) throw ValidationError(errc::parse_error, path + ": unsupported version");
  GramKernel k;
  k.family = family_from_tag(read_u64(in, path), path);
  const auto n = static_cast<Eigen::Index>(read_u64(in, path));
  const auto hp = read_u64(in, path);
  k.hyperparams.resize(hp);
  if (hp > 0) read_doubles(in, path, k.hyperparams.data(), hp);
  k.matrix.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) read_doubles(in, path, &k.matrix(r, c), 1);
  return k;
}

void save_svgp_checkpoint(const std::string& base_path, const SVGPState& state) {
  json header;
  header["format"] = "svgp-checkpoint";
  header["version"] = 1;
  header["inducing_indices"] = state.inducing_indices;
  header["num_outputs"] = state.num_outputs();
  header["kernel"] = {{"family", kernel_family_name(state.kernel_family)},
                      {"params", state.kernel_params},
                      {"rescaled", state.kernel_rescaled}};
  header["noise_variance"] = state.noise_variance;
  header["transforms"] = {{"positive", "softplus"}};
  header["payload"] = {{"file", base_path + ".bin"},
                       {"layout", "mean column-major J*C, then per-output full J*J factors column-major"}};
  save_json(base_path + ".json", header);

  std::ofstream out(base_path + ".bin", std::ios::binary);
  if (!out) throw ValidationError(errc::io_failure, "cannot write " + base_path + ".bin");
  write_doubles(out, state.variational_mean.data(),
                static_cast<std::size_t>(state.variational_mean.size()));
  for (const auto& chol : state.variational_chol)
    write_doubles(out, chol.data(), static_cast<std::size_t>(chol.size()));
  if (!out) throw ValidationError(errc::io_failure, "failed writing " + base_path + ".bin");
}

SVGPState load_svgp_checkpoint(const std::string& base_path) {
  const json header = load_json(base_path + ".json");
  if (header.value("format", "") != std::string("svgp-checkpoint"))
    throw ValidationError(errc::parse_error, base_path + ".json: not an svgp checkpoint");
  SVGPState state;
  state.inducing_indices = header.at("inducing_indices").get<IndexList>();
  const int cn = header.at("num_outputs").get<int>();
  const int jn = static_cast<int>(state.inducing_indices.size());
  const std::string family = header.at("kernel").at("family").get<std::string>();
  if (family == "matern") state.kernel_family = KernelFamily::matern;
  else if (family == "diffusion") state.kernel_family = KernelFamily::diffusion;
  else if (family == "graph_matern") state.kernel_family = KernelFamily::graph_matern;
  else if (family == "composite") state.kernel_family = KernelFamily::composite;
  else state.kernel_family = KernelFamily::custom;
  state.kernel_params = header.at("kernel").at("params").get<std::vector<double>>();
  state.kernel_rescaled = header.at("kernel").at("rescaled").get<bool>();
  state.noise_variance = header.at("noise_variance").get<double>();

  std::ifstream in(base_path + ".bin", std::ios::binary);
  if (!in) throw ValidationError(errc::parse_error, "cannot open " + base_path + ".bin");
  state.variational_mean.resize(jn, cn);
  read_doubles(in, base_path + ".bin", state.variational_mean.data(),
               static_cast<std::size_t>(state.variational_mean.size()));
  state.variational_chol.assign(static_cast<std::size_t>(cn), Matrix(jn, jn));
  for (auto& chol : state.variational_chol)
    read_doubles(in, base_path + ".bin", chol.data(), static_cast<std::size_t>(chol.size()));
  return state;
}

void save_factors(const std::string& base_path, const FactorPair& fp) {
  json meta;
  meta["format"] = "kpmf-factors";
  meta["version"] = 1;
  meta["rows"] = fp.u.rows();
  meta["cols"] = fp.w.rows();
  meta["latent_dim"] = fp.latent_dim();
  meta["noise_variance"] = fp.noise_variance;
  meta["payload"] = {{"file", base_path + ".bin"}, {"layout", "U column-major then W column-major"}};
  save_json(base_path + ".json", meta);

  std::ofstream out(base_path + ".bin", std::ios::binary);
  if (!out) throw ValidationError(errc::io_failure, "cannot write " + base_path + ".bin");
  write_doubles(out, fp.u.data(), static_cast<std::size_t>(fp.u.size()));
  write_doubles(out, fp.w.data(), static_cast<std::size_t>(fp.w.size()));
  if (!out) throw ValidationError(errc::io_failure, "failed writing " + base_path + ".bin");
}

FactorPair load_factors(const std::string& base_path) {
  const json meta = load_json(base_path + ".json");
  if (meta.value("format", "") != std::string("kpmf-factors"))
    throw ValidationError(errc::parse_error, base_path + ".json: not a factor checkpoint");
  FactorPair fp;
  const auto rows = meta.at("rows").get<Eigen::Index>();
  const auto cols = meta.at("cols").get<Eigen::Index>();
  const auto dim = meta.at("latent_dim").get<Eigen::Index>();
  fp.noise_variance = meta.at("noise_variance").get<double>();
  fp.u.resize(rows, dim);
  fp.w.resize(cols, dim);
  std::ifstream in(base_path + ".bin", std::ios::binary);
  if (!in) throw ValidationError(errc::parse_error, "cannot open " + base_path + ".bin");
  read_doubles(in, base_path + ".bin", fp.u.data(), static_cast<std::size_t>(fp.u.size()));
  read_doubles(in, base_path + ".bin", fp.w.data(), static_cast<std::size_t>(fp.w.size()));
  return fp;
}

void save_embedding(const std::string& path, const Matrix& coords,
                    const std::vector<std::string>& names,
                    const std::vector<std::string>* labels) {
  if (static_cast<Eigen::Index>(names.size()) != coords.rows())
    throw ValidationError(errc::dimension_mismatch, "names do not match coordinate rows");
  std::ofstream out = create_text(path);
  for (Eigen::Index v = 0; v < coords.rows(); ++v) {
    out << names[static_cast<std::size_t>(v)];
    for (Eigen::Index q = 0; q < coords.cols(); ++q) out << '\t' << format_double(coords(v, q));
    if (labels) out << '\t' << (*labels)[static_cast<std::size_t>(v)];
    out << '\n';
  }
}

void save_trace(const std::string& path, const std::vector<double>& values) {
  std::ofstream out = create_text(path);
  for (std::size_t i = 0; i < values.size(); ++i)
    out << i << '\t' << format_double(values[i]) << '\n';
}

void save_inducing_set(const std::string& path, const InducingSet& set, int cluster_count,
                       const Vector& gamma) {
  json j;
  j["seed"] = set.seed;
  j["k"] = cluster_count;
  j["J"] = set.indices.size();
  j["indices"] = set.indices;
  std::vector<double> selected;
  selected.reserve(set.indices.size());
  for (int v : set.indices) selected.push_back(gamma[v]);
  j["gamma_of_selected"] = selected;
  save_json(path, j);
}

void save_results(const std::string& path, const std::map<std::string, double>& metrics,
                  const nlohmann::json& conventions, std::uint64_t seed,
                  const std::string& config_hash) {
  json j;
  j["metrics"] = json::object();
  for (const auto& [key, value] : metrics) j["metrics"][key] = value;
  j["conventions"] = conventions;
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  save_json(path, j);
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in = open_text(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(errc::parse_error, path + ": " + e.what());
  }
}

void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out = create_text(path);
  out << j.dump(2) << '\n';
  if (!out) throw ValidationError(errc::io_failure, "failed writing " + path);
}

}  // namespace hypergp
