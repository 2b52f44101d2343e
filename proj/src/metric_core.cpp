#include "lml/metric_core.hpp"

#include "lml/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lml {
namespace {

void check_square(const MetricMatrix& M, const char* op) {
  if (M.values.rows() != M.values.cols()) {
    throw ShapeError(std::string(op) + ": metric matrix must be square, got " +
                     std::to_string(M.values.rows()) + "x" +
                     std::to_string(M.values.cols()));
  }
}

void check_dims(const MetricMatrix& M, const FeatureVector& x,
                const FeatureVector& y, const char* op) {
  check_square(M, op);
  if (x.size() != M.values.rows() || y.size() != M.values.rows()) {
    throw ShapeError(std::string(op) + ": dimension mismatch, metric is " +
                     std::to_string(M.values.rows()) + "x" +
                     std::to_string(M.values.cols()) + " but vectors are " +
                     std::to_string(x.size()) + " and " +
                     std::to_string(y.size()));
  }
}

void check_triplet(const Triplet& t, const LabeledDataset& X) {
  const Index n = X.size();
  for (Index idx : {t.anchor, t.positive, t.negative}) {
    if (idx < 0 || idx >= n) {
      throw IndexError("triplet index " + std::to_string(idx) +
                       " out of range for dataset of size " +
                       std::to_string(n));
    }
  }
}

}  // namespace

double similarity(const MetricMatrix& M, const FeatureVector& x,
                  const FeatureVector& y) {
  if (M.kind != MetricKind::Similarity) {
    throw ConfigError("similarity: metric kind must be Similarity");
  }
  check_dims(M, x, y, "similarity");
  return x.dot(M.values * y);
}

double distance(const MetricMatrix& M, const FeatureVector& x,
                const FeatureVector& y) {
  if (M.kind != MetricKind::Distance) {
    throw ConfigError("distance: metric kind must be Distance");
  }
  check_dims(M, x, y, "distance");
  const Vector diff = x - y;
  return diff.dot(M.values * diff);
}

double metric_score(const MetricMatrix& M, const FeatureVector& x,
                    const FeatureVector& y) {
  return M.kind == MetricKind::Similarity ? similarity(M, x, y)
                                          : distance(M, x, y);
}

double triplet_hinge_loss(const MetricMatrix& M, const Triplet& t,
                          const LabeledDataset& X) {
  check_triplet(t, X);
  const FeatureVector xi = X.X.row(t.anchor).transpose();
  const FeatureVector xj = X.X.row(t.positive).transpose();
  const FeatureVector xk = X.X.row(t.negative).transpose();
  if (M.kind == MetricKind::Similarity) {
    return std::max(0.0, 1.0 - similarity(M, xi, xj) + similarity(M, xi, xk));
  }
  return std::max(0.0, 1.0 + distance(M, xi, xj) - distance(M, xi, xk));
}

GradientSummary aggregate_gradient(const MetricMatrix& M, const TripletSet& T,
                                   const LabeledDataset& X, bool active_only) {
  check_square(M, "aggregate_gradient");
  const Index dh = X.dim();
  if (M.values.rows() != dh) {
    throw ShapeError("aggregate_gradient: metric is " +
                     std::to_string(M.values.rows()) + "x" +
                     std::to_string(M.values.cols()) + " but data has " +
                     std::to_string(dh) + " features");
  }

  GradientSummary out;
  out.delta = Matrix::Zero(dh, dh);
  for (const Triplet& t : T.triplets) {
    check_triplet(t, X);
    // a hinge exactly at the kink counts as inactive
    if (active_only && triplet_hinge_loss(M, t, X) <= 0.0) continue;
    const FeatureVector xi = X.X.row(t.anchor).transpose();
    if (M.kind == MetricKind::Similarity) {
      const Vector diff =
          X.X.row(t.negative).transpose() - X.X.row(t.positive).transpose();
      out.delta.noalias() += xi * diff.transpose();
      out.delta.noalias() += diff * xi.transpose();
    } else {
      const Vector dij = xi - X.X.row(t.positive).transpose();
      const Vector dik = xi - X.X.row(t.negative).transpose();
      out.delta.noalias() += dij * dij.transpose();
      out.delta.noalias() -= dik * dik.transpose();
    }
    ++out.triplet_count;
  }
  return out;
}

void validate_metric(const MetricMatrix& M) {
  check_square(M, "validate_metric");
  if (!M.values.allFinite()) {
    throw ConfigError("validate_metric: non-finite entries");
  }
  if (M.kind == MetricKind::Distance) {
    const double asym = (M.values - M.values.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) {
      throw ConfigError("validate_metric: distance metric asymmetric by " +
                        std::to_string(asym));
    }
  }
}

Matrix clip_to_psd(const Matrix& M) {
  if (M.rows() != M.cols()) {
    throw ShapeError("clip_to_psd: matrix must be square");
  }
  const Matrix sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Vector clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace lml
