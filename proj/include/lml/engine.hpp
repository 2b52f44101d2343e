#pragma once

#include "lml/base_learners.hpp"
#include "lml/dictionary.hpp"
#include "lml/task_solver.hpp"
#include "lml/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lml {

struct EngineConfig {
  Index d = 5;             // dictionary subspace dimension
  double lambda_t = 0.01;  // shared off-diagonal sparsity weight
  double gamma = 0.01;     // dictionary Frobenius regularizer
  BaseLearnerConfig base;
  SolverConfig solver;     // solver.lambda_t is overwritten by lambda_t
  double dict_step = 1e-3;
  int dict_steps = 5;      // 0 disables dictionary refinement
  int num_clusters = 4;    // dictionary initialization
  std::vector<int> j_scales = {10, 20, 50};
  int mine_neighbors = 3;
  int mine_impostors = 10;
  std::uint64_t seed = 0;
};

void validate(const EngineConfig& cfg);

struct ActiveTask {
  std::string task_id;
  LabeledDataset data;
  TripletSet triplets;
};

/// Lifelong state: the shared dictionary plus one summary per task. Only the
/// active task retains raw samples; everything else is O(d*d_hat +
/// m*(d^2 + d_hat^2)) regardless of how much data the tasks had.
struct EngineState {
  std::optional<LifelongDictionary> dictionary;
  std::map<std::string, TaskSummary> tasks;
  std::optional<ActiveTask> active_task;
  EngineConfig config;

  std::size_t task_count() const { return tasks.size(); }
};

EngineState make_engine(const EngineConfig& cfg);

/// Feeds one batch. The first batch ever fixes d_hat and initializes the
/// dictionary. A new task id registers a task; a known id appends to the
/// task's buffer if it is the active one and otherwise restarts the buffer
/// from this batch (prior raw data was discarded when the task went
/// inactive). Ends by running update_task.
void observe_batch(EngineState& state, const LabeledDataset& batch,
                   const std::string& task_id);

/// One lifelong update for the active task: base learner -> PA target ->
/// FISTA solve of W_t (warm-started) -> freeze Delta_t at the base solution
/// -> refine the dictionary over all stored summaries. A task with an empty
/// triplet set records a zero-gradient summary and leaves W unchanged.
void update_task(EngineState& state, const std::string& task_id);

/// L0' W_t L0 with the task's metric kind.
MetricMatrix task_metric(const EngineState& state, const std::string& task_id);

/// Versioned text checkpoint: config, dictionary, and per-task W/Delta.
/// Raw samples and the transient m_star are never serialized. Round-trips
/// reproduce identical task_metric outputs.
void save_checkpoint(const EngineState& state, const std::string& path);
EngineState load_checkpoint(const std::string& path);

}  // namespace lml
