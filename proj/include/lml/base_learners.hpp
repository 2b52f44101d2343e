#pragma once

#include "lml/types.hpp"

#include <cstdint>

namespace lml {

struct BaseLearnerConfig {
  MetricKind kind = MetricKind::Distance;
  double aggressiveness = 0.1;  // OASIS update cap C, > 0
  int iterations = 20000;       // OASIS draws / batch subgradient steps
  double batch_step = 0.1;      // distance learner stepsize, > 0
  double pa_eta = 0.1;          // learning rate of the PA target, >= 0
  std::uint64_t seed = 0;
};

void validate(const BaseLearnerConfig& cfg);

/// Online passive-aggressive similarity learner. Starting from M = I, draws
/// triplets uniformly (seeded); when the hinge loss l is positive applies
/// M <- M + tau * xi (xj - xk)' with tau = min(C, l / ||xi (xj-xk)'||_F^2).
/// Degenerate zero-norm directions are skipped.
MetricMatrix oasis_fit(const LabeledDataset& D, const TripletSet& T,
                       const BaseLearnerConfig& cfg);

/// Batch subgradient distance learner. Starting from M = I, takes
/// `iterations` full steps M <- M - batch_step * (1/|T|) * Delta_active(M).
MetricMatrix batch_distance_fit(const LabeledDataset& D, const TripletSet& T,
                                const BaseLearnerConfig& cfg);

/// PA linearization target M* = M_t - pa_eta * G_t with G_t the mean active
/// subgradient (1/|T|) Delta_active(M_t). Returns M_t itself when T is empty
/// or every triplet is satisfied.
Matrix pa_target(const MetricMatrix& M_t, const LabeledDataset& D,
                 const TripletSet& T, const BaseLearnerConfig& cfg);

/// Dispatch on cfg.kind.
MetricMatrix fit_base_metric(const LabeledDataset& D, const TripletSet& T,
                             const BaseLearnerConfig& cfg);

}  // namespace lml
