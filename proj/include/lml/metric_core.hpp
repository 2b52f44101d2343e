#pragma once

#include "lml/types.hpp"

namespace lml {

/// Bilinear similarity x' M y. Requires kind Similarity.
double similarity(const MetricMatrix& M, const FeatureVector& x,
                  const FeatureVector& y);

/// Squared distance (x-y)' M (x-y). Requires kind Distance; with M = I this
/// is the squared Euclidean distance.
double distance(const MetricMatrix& M, const FeatureVector& x,
                const FeatureVector& y);

/// Score with the orientation implied by the kind (similarity: larger is
/// closer; distance: smaller is closer).
double metric_score(const MetricMatrix& M, const FeatureVector& x,
                    const FeatureVector& y);

/// Margin-1 triplet hinge loss at M.
///   Similarity: max(0, 1 - s(xi,xj) + s(xi,xk))
///   Distance:   max(0, 1 + d(xi,xj) - d(xi,xk))
double triplet_hinge_loss(const MetricMatrix& M, const Triplet& t,
                          const LabeledDataset& X);

/// Sum of per-triplet gradient matrices:
///   Similarity: xi (xk - xj)' + (xk - xj) xi'   (symmetrized form)
///   Distance:   (xi-xj)(xi-xj)' - (xi-xk)(xi-xk)'
/// With active_only, only triplets with strictly positive hinge loss at M
/// contribute (a loss exactly at the kink counts as inactive). An empty
/// triplet set yields a zero matrix with triplet_count = 0.
GradientSummary aggregate_gradient(const MetricMatrix& M, const TripletSet& T,
                                   const LabeledDataset& X,
                                   bool active_only = true);

/// Checks squareness, finiteness and (Distance kind) symmetry within 1e-10.
/// PSD is deliberately not enforced.
void validate_metric(const MetricMatrix& M);

/// Post-hoc projection onto the PSD cone: symmetrize, then clip negative
/// eigenvalues to zero.
Matrix clip_to_psd(const Matrix& M);

}  // namespace lml
