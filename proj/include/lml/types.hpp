#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace lml {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Ambient-space feature vector of length d_hat.
using FeatureVector = Eigen::VectorXd;

enum class MetricKind { Similarity, Distance };

const char* to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

/// Dense square metric parameter matrix together with its interpretation:
/// bilinear similarity x'My or squared distance (x-y)'M(x-y).
struct MetricMatrix {
  Matrix values;
  MetricKind kind = MetricKind::Distance;
};

/// Side-information triple over a dataset: anchor and positive share a
/// class, the negative comes from a different class.
struct Triplet {
  Index anchor = 0;
  Index positive = 0;
  Index negative = 0;

  bool operator==(const Triplet&) const = default;
};

/// Aggregate (sub)gradient of a task loss with respect to the metric,
/// retained in place of the raw samples once a task is done.
struct GradientSummary {
  Matrix delta;                   // d_hat x d_hat
  std::size_t triplet_count = 0;  // triplets that contributed to delta
};

/// One task batch: samples as rows, integer class labels.
struct LabeledDataset {
  Matrix X;            // n x d_hat
  std::vector<int> y;  // length n
  std::string task_id;

  Index size() const { return X.rows(); }
  Index dim() const { return X.cols(); }
};

struct TripletSet {
  std::vector<Triplet> triplets;
  Index source_n = 0;

  std::size_t size() const { return triplets.size(); }
  bool empty() const { return triplets.empty(); }
};

}  // namespace lml
