#ifndef HYPERGP_METRICS_HPP
#define HYPERGP_METRICS_HPP

#include <vector>

#include "hypergp/types.hpp"

namespace hypergp {

struct ClassificationMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Predicted class = argmax probability. Binary problems use the positive
// class (label 1); with more classes precision and recall are macro-averaged,
// counting classes with an empty denominator as 0.
ClassificationMetrics classification_metrics(const std::vector<int>& y_true, const Matrix& probs);

// Expected calibration error over equal-width bins of the top-class
// probability; empty bins contribute nothing.
double ece(const std::vector<int>& y_true, const Matrix& probs, int num_bins = 10);

double rmse(const Vector& y_true, const Vector& y_pred);

struct ClusteringScores {
  double ami = 0.0;           // adjusted mutual information, permutation model,
                              // max normalisation
  double homogeneity = 0.0;   // 1 - H(true | pred) / H(true), 1 if H(true) = 0
  double completeness = 0.0;  // 1 - H(pred | true) / H(pred), 1 if H(pred) = 0
};

ClusteringScores clustering_scores(const std::vector<int>& labels_true,
                                   const std::vector<int>& labels_pred);

}  // namespace hypergp

#endif
