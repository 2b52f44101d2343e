#pragma once

#include "lml/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lml {

/// Shared basis rows for all task metrics. L0 is d x d_hat; after
/// initialization its rows are unit-norm with pairwise |cosine| <= 0.99.
struct LifelongDictionary {
  Matrix L0;

  Index d() const { return L0.rows(); }
  Index d_hat() const { return L0.cols(); }
};

/// What survives a task once its raw data is gone: the task weights and a
/// frozen gradient summary. m_star is kept only while the task is active.
struct TaskSummary {
  std::string task_id;
  Matrix W;               // d x d
  GradientSummary delta;  // evaluated at the base-learner solution, frozen
  Matrix m_star;          // d_hat x d_hat; empty once the task is inactive
  MetricKind kind = MetricKind::Distance;
};

/// Seeds the dictionary from the first task: k-means clusters the data, and
/// for each cluster center and each neighborhood scale J the J nearest
/// points of every class form a local Fisher problem (S_w + eps I)^-1 S_b.
/// Leading eigenvectors across all clusters and scales are ranked by
/// eigenvalue, unit-normalized, deduplicated at |cosine| > 0.99 and the top
/// d become the rows of L0.
LifelongDictionary init_dictionary(const LabeledDataset& first_task, Index d,
                                   int num_clusters,
                                   const std::vector<int>& J_scales,
                                   std::uint64_t seed);

/// (1/m) sum_t Wt' L0 Delta_t + gamma L0. With symmetrized set, the data
/// term becomes Wt L0 Delta_t' + Wt' L0 Delta_t, the exact differential of
/// tr(Delta' L0' W L0).
Matrix dictionary_gradient(const LifelongDictionary& dict,
                           const std::vector<TaskSummary>& summaries,
                           double gamma, bool symmetrized = false);

/// Plain gradient descent: L0 <- L0 - step * dictionary_gradient(...),
/// repeated `steps` times.
LifelongDictionary refine_dictionary(const LifelongDictionary& dict,
                                     const std::vector<TaskSummary>& summaries,
                                     double gamma, double step, int steps,
                                     bool symmetrized = false);

/// Surrogate objective monitored by the line-searched refinement: the
/// passive-aggressive quadratic ||L0' W L0 - M*||_F^2 for summaries that
/// still carry m_star, the linearized loss tr(Delta' L0' W L0) for those
/// that do not, averaged over tasks, plus gamma ||L0||_F^2.
double dictionary_surrogate(const LifelongDictionary& dict,
                            const std::vector<TaskSummary>& summaries,
                            double gamma);

/// Gradient refinement with step halving whenever the surrogate would
/// increase (up to max_halvings per step); if no decrease is reachable the
/// remaining steps are skipped, so the surrogate never increases.
LifelongDictionary refine_dictionary_linesearch(
    const LifelongDictionary& dict, const std::vector<TaskSummary>& summaries,
    double gamma, double step, int steps, int max_halvings = 5);

/// Text persistence: header "d d_hat", then row-major reals at 17
/// significant digits. Round-trips bit-exactly.
void save_dictionary(const LifelongDictionary& dict, const std::string& path);
LifelongDictionary load_dictionary(const std::string& path);

}  // namespace lml
