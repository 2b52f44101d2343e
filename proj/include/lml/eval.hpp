#pragma once

#include "lml/engine.hpp"
#include "lml/rng.hpp"
#include "lml/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lml {

/// Majority label among the k nearest training points under M (distance
/// ascending, similarity descending; neighbor ties broken by lower index).
/// Vote ties go to the label with the smaller aggregate distance (larger
/// aggregate similarity) within the k-set, then to the lower label id.
int knn_classify(const MetricMatrix& M, const LabeledDataset& train,
                 const FeatureVector& query, int k);

/// Fraction of `test` rows misclassified by knn_classify against `train`.
double knn_error(const MetricMatrix& M, const LabeledDataset& train,
                 const LabeledDataset& test, int k);

struct ErrorStat {
  double mean = 0.0;
  double stddev = 0.0;  // sample std over repetitions (0 when reps == 1)
};

struct EvalReport {
  std::map<std::string, ErrorStat> per_task_error;  // final-stage test errors
  double avg_error = 0.0;                           // mean of per-task means
  double train_seconds = 0.0;                       // wall clock, training only
  int reps = 0;
};

struct SplitFractions {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

struct TaskSplit {
  LabeledDataset train;
  LabeledDataset validation;
  LabeledDataset test;
};

/// Stratified split: each class is shuffled and divided by the fractions,
/// so per-class counts are exact. Throws ConfigError when the training part
/// comes out empty.
TaskSplit split_dataset(const LabeledDataset& D, const SplitFractions& f,
                        Rng& rng);

/// stage = 0 records are single-task base-learner baselines; stage >= 1
/// records are lifelong errors of `task` after the stage-th task arrived.
struct StageRecord {
  int stage = 0;
  std::string task;
  int rep = 0;
  double error = 0.0;
  double seconds = 0.0;  // stage training time; 0 unless timing is enabled
};

struct SequenceResult {
  EvalReport report;
  Matrix stage_errors;  // (stages x tasks) mean over reps; NaN where task > stage
  std::vector<double> baseline_errors;  // per task, mean over reps
  std::vector<std::string> task_order;
  std::vector<StageRecord> records;
};

struct SequenceOptions {
  SplitFractions splits;
  int reps = 1;
  std::vector<std::uint64_t> seeds;  // one per rep, or a single seed to derive from
  int knn_k = 3;
  bool timing = false;  // include wall-clock seconds in records
};

/// Trains the tasks sequentially through the engine; after each arrival,
/// evaluates the test error of every task learned so far, producing the
/// stage matrix. Also fits each base learner standalone for the single-task
/// baselines. Averages over reps stratified resplits.
SequenceResult run_sequence_experiment(const std::vector<LabeledDataset>& tasks,
                                       const SequenceOptions& opt,
                                       const EngineConfig& cfg);

struct SweepResult {
  std::map<double, double> avg_error;  // swept value -> avg test error
  std::vector<std::pair<double, std::string>> failures;  // value -> reason
};

SweepResult sweep_dimension(const std::vector<LabeledDataset>& tasks,
                            const std::vector<Index>& d_values,
                            const SequenceOptions& opt, EngineConfig cfg);

SweepResult sweep_sparsity(const std::vector<LabeledDataset>& tasks,
                           const std::vector<double>& lambda_values,
                           const SequenceOptions& opt, EngineConfig cfg);

/// One "key=value ..." record per line; summaries as '#' comments.
void write_sequence_report(const SequenceResult& result, std::ostream& out);
void write_sweep_report(const SweepResult& result, const std::string& key,
                        std::ostream& out);

}  // namespace lml
