#pragma once

#include "lml/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lml {

/// CSV with a header row; one column must be named "label" (integer), all
/// other columns are numeric features. Row order is preserved; the task id
/// defaults to the file stem. Parse failures name the row and column.
LabeledDataset load_csv(const std::string& path);

/// Writes features at 17 significant digits so load_csv(save_csv(D)) is the
/// identity.
void save_csv(const LabeledDataset& D, const std::string& path);

struct SyntheticSpec {
  Index d_hat = 20;
  Index d_true = 5;
  int num_tasks = 6;
  int classes_per_task = 2;
  int samples_per_class = 50;
  double noise_sigma = 0.5;
  double offdiag_density = 0.3;  // off-diagonal support of each W_true
  std::uint64_t seed = 0;
};

void validate(const SyntheticSpec& spec);

struct SyntheticBundle {
  std::vector<LabeledDataset> tasks;
  Matrix L0_true;               // d_true x d_hat, orthonormal rows
  std::vector<Matrix> W_true;   // one PSD matrix per task
};

/// Multi-task generator with a shared ground-truth subspace: L0_true has
/// orthonormal rows; each task draws a PSD W_true with the requested
/// off-diagonal support and class means inside the subspace (the mean
/// constellation is shaped by chol(W_true)^-1 so the planted structure is
/// recoverable); samples are the means plus ambient Gaussian noise.
/// Deterministic under the seed.
SyntheticBundle generate_synthetic(const SyntheticSpec& spec);

}  // namespace lml
