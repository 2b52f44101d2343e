#include "lml/base_learners.hpp"

#include "lml/errors.hpp"
#include "lml/metric_core.hpp"
#include "lml/rng.hpp"

#include <cmath>
#include <string>

namespace lml {

void validate(const BaseLearnerConfig& cfg) {
  if (!(cfg.aggressiveness > 0.0)) {
    throw ConfigError("base learner: aggressiveness must be > 0");
  }
  if (cfg.iterations < 1) {
    throw ConfigError("base learner: iterations must be >= 1");
  }
  if (!(cfg.batch_step > 0.0)) {
    throw ConfigError("base learner: batch_step must be > 0");
  }
  if (!(cfg.pa_eta >= 0.0) || !std::isfinite(cfg.pa_eta)) {
    throw ConfigError("base learner: pa_eta must be finite and >= 0");
  }
}

MetricMatrix oasis_fit(const LabeledDataset& D, const TripletSet& T,
                       const BaseLearnerConfig& cfg) {
  validate(cfg);
  if (cfg.kind != MetricKind::Similarity) {
    throw ConfigError("oasis_fit requires kind Similarity");
  }
  if (T.empty()) throw ConfigError("oasis_fit: empty triplet set");

  const Index dh = D.dim();
  Rng rng(cfg.seed);
  MetricMatrix M{Matrix::Identity(dh, dh), MetricKind::Similarity};
  for (int it = 0; it < cfg.iterations; ++it) {
    const Triplet& t = T.triplets[rng.uniform_index(T.size())];
    const FeatureVector xi = D.X.row(t.anchor).transpose();
    const Vector w = D.X.row(t.negative).transpose() -
                     D.X.row(t.positive).transpose();  // xk - xj
    const double loss = 1.0 + xi.dot(M.values * w);
    if (loss <= 0.0) continue;  // passive branch
    const double norm2 = xi.squaredNorm() * w.squaredNorm();
    if (norm2 <= 0.0) continue;  // degenerate duplicate points
    const double tau = std::min(cfg.aggressiveness, loss / norm2);
    M.values.noalias() -= tau * xi * w.transpose();
  }
  return M;
}

MetricMatrix batch_distance_fit(const LabeledDataset& D, const TripletSet& T,
                                const BaseLearnerConfig& cfg) {
  validate(cfg);
  if (cfg.kind != MetricKind::Distance) {
    throw ConfigError("batch_distance_fit requires kind Distance");
  }
  if (T.empty()) throw ConfigError("batch_distance_fit: empty triplet set");

  const Index dh = D.dim();
  MetricMatrix M{Matrix::Identity(dh, dh), MetricKind::Distance};
  const double scale = cfg.batch_step / static_cast<double>(T.size());
  for (int it = 1; it <= cfg.iterations; ++it) {
    const GradientSummary g = aggregate_gradient(M, T, D, /*active_only=*/true);
    if (g.triplet_count == 0) break;  // every triplet satisfied
    M.values.noalias() -= scale * g.delta;
    if (!M.values.allFinite()) {
      throw DivergenceError("batch_distance_fit: diverged at iteration " +
                            std::to_string(it) + "; reduce batch_step");
    }
  }
  return M;
}

Matrix pa_target(const MetricMatrix& M_t, const LabeledDataset& D,
                 const TripletSet& T, const BaseLearnerConfig& cfg) {
  if (T.empty()) return M_t.values;
  const GradientSummary g = aggregate_gradient(M_t, T, D, /*active_only=*/true);
  return M_t.values - (cfg.pa_eta / static_cast<double>(T.size())) * g.delta;
}

MetricMatrix fit_base_metric(const LabeledDataset& D, const TripletSet& T,
                             const BaseLearnerConfig& cfg) {
  return cfg.kind == MetricKind::Similarity ? oasis_fit(D, T, cfg)
                                            : batch_distance_fit(D, T, cfg);
}

}  // namespace lml
