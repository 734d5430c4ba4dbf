#include "hypergp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hypergp/errors.hpp"

namespace hypergp {

namespace {

void check_probs(const std::vector<int>& y_true, const Matrix& probs) {
  if (y_true.empty()) throw ValidationError(errc::empty_input, "no points to score");
  if (static_cast<Eigen::Index>(y_true.size()) != probs.rows())
    throw ValidationError(errc::dimension_mismatch, "labels do not match probability rows");
  for (Eigen::Index n = 0; n < probs.rows(); ++n) {
    if (std::abs(probs.row(n).sum() - 1.0) > 1e-6 || probs.row(n).minCoeff() < -1e-12)
      throw ValidationError(errc::parse_error,
                            "row " + std::to_string(n) + " is not on the probability simplex");
  }
  for (int label : y_true)
    if (label < 0 || label >= probs.cols())
      throw ValidationError(errc::index_out_of_range, "class label out of range");
}

int argmax_class(const Matrix& probs, Eigen::Index n) {
  Eigen::Index arg = 0;
  probs.row(n).maxCoeff(&arg);
  return static_cast<int>(arg);
}

}  // namespace

ClassificationMetrics classification_metrics(const std::vector<int>& y_true, const Matrix& probs) {
  check_probs(y_true, probs);
  const int classes = static_cast<int>(probs.cols());
  const Eigen::Index n = probs.rows();

  std::vector<int> tp(static_cast<std::size_t>(classes), 0);
  std::vector<int> fp(static_cast<std::size_t>(classes), 0);
  std::vector<int> fn(static_cast<std::size_t>(classes), 0);
  int correct = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int truth = y_true[static_cast<std::size_t>(i)];
    const int pred = argmax_class(probs, i);
    if (pred == truth) {
      ++correct;
      ++tp[static_cast<std::size_t>(pred)];
    } else {
      ++fp[static_cast<std::size_t>(pred)];
      ++fn[static_cast<std::size_t>(truth)];
    }
  }

  ClassificationMetrics out;
  out.accuracy = static_cast<double>(correct) / static_cast<double>(n);

  const auto ratio = [](int num, int den) {
    return den > 0 ? static_cast<double>(num) / den : 0.0;
  };
  if (classes == 2) {
    // Binary: score the positive class.
    out.precision = ratio(tp[1], tp[1] + fp[1]);
    out.recall = ratio(tp[1], tp[1] + fn[1]);
  } else {
    for (int c = 0; c < classes; ++c) {
      out.precision += ratio(tp[static_cast<std::size_t>(c)],
                             tp[static_cast<std::size_t>(c)] + fp[static_cast<std::size_t>(c)]);
      out.recall += ratio(tp[static_cast<std::size_t>(c)],
                          tp[static_cast<std::size_t>(c)] + fn[static_cast<std::size_t>(c)]);
    }
    out.precision /= classes;
    out.recall /= classes;
  }
  return out;
}

double ece(const std::vector<int>& y_true, const Matrix& probs, int num_bins) {
  check_probs(y_true, probs);
  if (num_bins < 1) throw ValidationError(errc::invalid_k, "need at least one bin");
  const Eigen::Index n = probs.rows();

  std::vector<int> count(static_cast<std::size_t>(num_bins), 0);
  std::vector<double> conf(static_cast<std::size_t>(num_bins), 0.0);
  std::vector<double> acc(static_cast<std::size_t>(num_bins), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int pred = argmax_class(probs, i);
    const double confidence = probs(i, pred);
    int b = static_cast<int>(std::floor(confidence * num_bins));
    b = std::clamp(b, 0, num_bins - 1);
    ++count[static_cast<std::size_t>(b)];
    conf[static_cast<std::size_t>(b)] += confidence;
    acc[static_cast<std::size_t>(b)] += (pred == y_true[static_cast<std::size_t>(i)]) ? 1.0 : 0.0;
  }
  double total = 0.0;
  for (int b = 0; b < num_bins; ++b) {
    const int c = count[static_cast<std::size_t>(b)];
    if (c == 0) continue;
    total += (static_cast<double>(c) / n) *
             std::abs(acc[static_cast<std::size_t>(b)] / c - conf[static_cast<std::size_t>(b)] / c);
  }
  return total;
}

double rmse(const Vector& y_true, const Vector& y_pred) {
  if (y_true.size() == 0) throw ValidationError(errc::empty_input, "no points to score");
  if (y_true.size() != y_pred.size())
    throw ValidationError(errc::dimension_mismatch, "vectors differ in length");
  return std::sqrt((y_true - y_pred).squaredNorm() / static_cast<double>(y_true.size()));
}

namespace {

// Contingency table with dense re-indexed labels.
struct Contingency {
  int n = 0;
  std::vector<int> a;                  // true-class sizes
  std::vector<int> b;                  // predicted-cluster sizes
  std::map<std::pair<int, int>, int> cells;
};

Contingency contingency_table(const std::vector<int>& t, const std::vector<int>& p) {
  Contingency c;
  c.n = static_cast<int>(t.size());
  std::map<int, int> tmap, pmap;
  for (int v : t)
    if (!tmap.count(v)) {
      const int id = static_cast<int>(tmap.size());
      tmap[v] = id;
    }
  for (int v : p)
    if (!pmap.count(v)) {
      const int id = static_cast<int>(pmap.size());
      pmap[v] = id;
    }
  c.a.assign(tmap.size(), 0);
  c.b.assign(pmap.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int ti = tmap[t[i]];
    const int pi = pmap[p[i]];
    ++c.a[static_cast<std::size_t>(ti)];
    ++c.b[static_cast<std::size_t>(pi)];
    ++c.cells[{ti, pi}];
  }
  return c;
}

double entropy(const std::vector<int>& sizes, int n) {
  double h = 0.0;
  for (int s : sizes)
    if (s > 0) h -= (static_cast<double>(s) / n) * std::log(static_cast<double>(s) / n);
  return h;
}

double mutual_information(const Contingency& c) {
  double mi = 0.0;
  for (const auto& [cell, nij] : c.cells) {
    const double pij = static_cast<double>(nij) / c.n;
    const double pa = static_cast<double>(c.a[static_cast<std::size_t>(cell.first)]) / c.n;
    const double pb = static_cast<double>(c.b[static_cast<std::size_t>(cell.second)]) / c.n;
    mi += pij * std::log(pij / (pa * pb));
  }
  return mi;
}

// Expectation of the mutual information under the permutation model, via the
// hypergeometric distribution of each cell count.
double expected_mutual_information(const Contingency& c) {
  const int n = c.n;
  const auto lf = [](int x) { return std::lgamma(static_cast<double>(x) + 1.0); };
  double emi = 0.0;
  for (int ai : c.a) {
    for (int bj : c.b) {
      const int lo = std::max(1, ai + bj - n);
      const int hi = std::min(ai, bj);
      for (int nij = lo; nij <= hi; ++nij) {
        const double term = (static_cast<double>(nij) / n) *
                            std::log(static_cast<double>(n) * nij /
                                     (static_cast<double>(ai) * bj));
        const double log_p = lf(ai) + lf(bj) + lf(n - ai) + lf(n - bj) - lf(n) - lf(nij) -
                             lf(ai - nij) - lf(bj - nij) - lf(n - ai - bj + nij);
        emi += term * std::exp(log_p);
      }
    }
  }
  return emi;
}

}  // namespace

ClusteringScores clustering_scores(const std::vector<int>& labels_true,
                                   const std::vector<int>& labels_pred) {
  if (labels_true.empty()) throw ValidationError(errc::empty_input, "no points to score");
  if (labels_true.size() != labels_pred.size())
    throw ValidationError(errc::dimension_mismatch, "label vectors differ in length");

  const Contingency c = contingency_table(labels_true, labels_pred);
  const double h_true = entropy(c.a, c.n);
  const double h_pred = entropy(c.b, c.n);
  const double mi = mutual_information(c);

  // Conditional entropies from the contingency cells.
  double h_true_given_pred = 0.0;
  double h_pred_given_true = 0.0;
  for (const auto& [cell, nij] : c.cells) {
    const double pij = static_cast<double>(nij) / c.n;
    h_true_given_pred -=
        pij * std::log(static_cast<double>(nij) / c.b[static_cast<std::size_t>(cell.second)]);
    h_pred_given_true -=
        pij * std::log(static_cast<double>(nij) / c.a[static_cast<std::size_t>(cell.first)]);
  }

  ClusteringScores out;
  out.homogeneity = h_true > 0.0 ? 1.0 - h_true_given_pred / h_true : 1.0;
  out.completeness = h_pred > 0.0 ? 1.0 - h_pred_given_true / h_pred : 1.0;

  if (c.a.size() == 1 && c.b.size() == 1) {
    out.ami = 1.0;  // both partitions trivial
    return out;
  }
  const double emi = expected_mutual_information(c);
  double denom = std::max(h_true, h_pred) - emi;
  if (denom >= 0.0)
    denom = std::max(denom, 1e-15);
  else
    denom = std::min(denom, -1e-15);
  out.ami = (mi - emi) / denom;
  return out;
}

}  // namespace hypergp
