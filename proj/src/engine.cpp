#include "lml/engine.hpp"

#include "lml/errors.hpp"
#include "lml/matrix_io.hpp"
#include "lml/rng.hpp"
#include "lml/triplet_miner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

namespace lml {
namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(v[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<int>(parse_integer(item)));
  }
  return out;
}

}  // namespace

void validate(const EngineConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("engine: d must be >= 1");
  if (!(cfg.lambda_t >= 0.0) || !std::isfinite(cfg.lambda_t)) {
    throw ConfigError("engine: lambda_t must be finite and >= 0");
  }
  if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) {
    throw ConfigError("engine: gamma must be finite and >= 0");
  }
  if (!(cfg.dict_step > 0.0)) throw ConfigError("engine: dict_step must be > 0");
  if (cfg.dict_steps < 0) throw ConfigError("engine: dict_steps must be >= 0");
  if (cfg.num_clusters < 1) {
    throw ConfigError("engine: num_clusters must be >= 1");
  }
  if (cfg.j_scales.empty()) throw ConfigError("engine: j_scales must be non-empty");
  if (cfg.mine_neighbors < 1 || cfg.mine_impostors < 1) {
    throw ConfigError("engine: mining parameters must be >= 1");
  }
  validate(cfg.base);
  validate(cfg.solver);
}

EngineState make_engine(const EngineConfig& cfg) {
  validate(cfg);
  EngineState state;
  state.config = cfg;
  return state;
}

void observe_batch(EngineState& state, const LabeledDataset& batch,
                   const std::string& task_id) {
  if (batch.size() < 1) throw ConfigError("observe_batch: empty batch");
  if (task_id.empty()) throw ConfigError("observe_batch: empty task id");
  const EngineConfig& cfg = state.config;

  if (state.dictionary &&
      batch.dim() != state.dictionary->d_hat()) {
    throw ShapeError("observe_batch: batch has " + std::to_string(batch.dim()) +
                     " features, engine expects " +
                     std::to_string(state.dictionary->d_hat()));
  }

  // stage the new active buffer before touching state
  LabeledDataset buffer;
  if (state.active_task && state.active_task->task_id == task_id) {
    const LabeledDataset& old = state.active_task->data;
    buffer.X.resize(old.size() + batch.size(), old.dim());
    buffer.X.topRows(old.size()) = old.X;
    buffer.X.bottomRows(batch.size()) = batch.X;
    buffer.y = old.y;
    buffer.y.insert(buffer.y.end(), batch.y.begin(), batch.y.end());
  } else {
    buffer = batch;
  }
  buffer.task_id = task_id;
  TripletSet triplets = mine_triplets(buffer, cfg.mine_neighbors,
                                      cfg.mine_impostors, cfg.seed);

  if (!state.dictionary) {
    // the first batch ever fixes d_hat and seeds the dictionary
    state.dictionary =
        init_dictionary(buffer, cfg.d, cfg.num_clusters, cfg.j_scales,
                        mix_seed(cfg.seed, "dictionary-init"));
  }

  if (state.tasks.find(task_id) == state.tasks.end()) {
    TaskSummary s;
    s.task_id = task_id;
    s.W = Matrix::Identity(cfg.d, cfg.d);
    s.delta.delta = Matrix::Zero(buffer.dim(), buffer.dim());
    s.kind = cfg.base.kind;
    state.tasks.emplace(task_id, std::move(s));
  }

  if (state.active_task && state.active_task->task_id != task_id) {
    // the outgoing task keeps only its summary; the PA target is transient
    state.tasks[state.active_task->task_id].m_star = Matrix();
  }
  state.active_task = ActiveTask{task_id, std::move(buffer), std::move(triplets)};

  update_task(state, task_id);
}

void update_task(EngineState& state, const std::string& task_id) {
  auto it = state.tasks.find(task_id);
  if (it == state.tasks.end()) {
    throw LookupError("update_task: unknown task '" + task_id + "'");
  }
  if (!state.active_task || state.active_task->task_id != task_id) {
    throw ConfigError("update_task: task '" + task_id +
                      "' has no active data buffer");
  }

  const EngineConfig& cfg = state.config;
  const ActiveTask& active = *state.active_task;
  TaskSummary& summary = it->second;
  summary.kind = cfg.base.kind;

  if (active.triplets.empty()) {
    summary.delta.delta = Matrix::Zero(active.data.dim(), active.data.dim());
    summary.delta.triplet_count = 0;
    summary.m_star = Matrix();
    log_warning("task '" + task_id +
                "' yielded no triplets; W left unchanged, zero gradient recorded");
  } else {
    const MetricMatrix M_t =
        fit_base_metric(active.data, active.triplets, cfg.base);
    Matrix m_star = pa_target(M_t, active.data, active.triplets, cfg.base);
    SolverConfig solver = cfg.solver;
    solver.lambda_t = cfg.lambda_t;
    SolveResult solved =
        solve_weights(*state.dictionary, m_star, summary.W, solver);
    summary.W = std::move(solved.W);
    summary.delta =
        aggregate_gradient(M_t, active.triplets, active.data, true);
    summary.m_star = std::move(m_star);
  }

  if (cfg.dict_steps > 0) {
    std::vector<TaskSummary> all;
    all.reserve(state.tasks.size());
    for (const auto& [id, s] : state.tasks) all.push_back(s);
    state.dictionary = refine_dictionary_linesearch(
        *state.dictionary, all, cfg.gamma, cfg.dict_step, cfg.dict_steps);
  }
}

MetricMatrix task_metric(const EngineState& state, const std::string& task_id) {
  auto it = state.tasks.find(task_id);
  if (it == state.tasks.end()) {
    throw LookupError("task_metric: unknown task '" + task_id + "'");
  }
  const Matrix& L0 = state.dictionary->L0;
  return {L0.transpose() * it->second.W * L0, it->second.kind};
}

void save_checkpoint(const EngineState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  const EngineConfig& cfg = state.config;

  out << "lml-checkpoint 1\n";
  out << "d " << cfg.d << '\n';
  char buf[64];
  auto real_line = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << key << ' ' << buf << '\n';
  };
  real_line("lambda_t", cfg.lambda_t);
  real_line("gamma", cfg.gamma);
  real_line("dict_step", cfg.dict_step);
  out << "dict_steps " << cfg.dict_steps << '\n';
  out << "num_clusters " << cfg.num_clusters << '\n';
  out << "j_scales " << join_ints(cfg.j_scales) << '\n';
  out << "mine_neighbors " << cfg.mine_neighbors << '\n';
  out << "mine_impostors " << cfg.mine_impostors << '\n';
  out << "seed " << cfg.seed << '\n';
  out << "base_kind " << to_string(cfg.base.kind) << '\n';
  real_line("base_aggressiveness", cfg.base.aggressiveness);
  out << "base_iterations " << cfg.base.iterations << '\n';
  real_line("base_batch_step", cfg.base.batch_step);
  real_line("base_pa_eta", cfg.base.pa_eta);
  out << "base_seed " << cfg.base.seed << '\n';
  real_line("solver_eta0", cfg.solver.eta0);
  real_line("solver_backtrack_shrink", cfg.solver.backtrack_shrink);
  out << "solver_max_iter " << cfg.solver.max_iter << '\n';
  real_line("solver_rel_tol", cfg.solver.rel_tol);

  if (state.dictionary) {
    out << "dictionary " << state.dictionary->d() << ' '
        << state.dictionary->d_hat() << '\n';
    write_matrix(out, state.dictionary->L0);
  } else {
    out << "dictionary 0 0\n";
  }

  out << "tasks " << state.tasks.size() << '\n';
  for (const auto& [id, s] : state.tasks) {
    out << "task " << id << '\n';
    out << "kind " << to_string(s.kind) << '\n';
    out << "triplet_count " << s.delta.triplet_count << '\n';
    out << "W " << s.W.rows() << ' ' << s.W.cols() << '\n';
    write_matrix(out, s.W);
    out << "delta " << s.delta.delta.rows() << ' ' << s.delta.delta.cols()
        << '\n';
    write_matrix(out, s.delta.delta);
  }
  if (!out) throw ConfigError("write failed: " + path);
}

namespace {

std::string expect_key(std::istream& in, const std::string& key,
                       const std::string& path) {
  std::string k;
  if (!(in >> k) || k != key) {
    throw ParseError(path + ": expected '" + key + "', got '" + k + "'");
  }
  std::string value;
  if (!(in >> value)) throw ParseError(path + ": missing value for " + key);
  return value;
}

}  // namespace

EngineState load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint: " + path);

  std::string magic, version;
  if (!(in >> magic >> version) || magic != "lml-checkpoint") {
    throw ParseError(path + ": not a checkpoint file");
  }
  if (version != "1") {
    throw ParseError(path + ": unsupported checkpoint version " + version);
  }

  EngineConfig cfg;
  cfg.d = parse_integer(expect_key(in, "d", path));
  cfg.lambda_t = parse_real(expect_key(in, "lambda_t", path));
  cfg.gamma = parse_real(expect_key(in, "gamma", path));
  cfg.dict_step = parse_real(expect_key(in, "dict_step", path));
  cfg.dict_steps =
      static_cast<int>(parse_integer(expect_key(in, "dict_steps", path)));
  cfg.num_clusters =
      static_cast<int>(parse_integer(expect_key(in, "num_clusters", path)));
  cfg.j_scales = split_ints(expect_key(in, "j_scales", path));
  cfg.mine_neighbors =
      static_cast<int>(parse_integer(expect_key(in, "mine_neighbors", path)));
  cfg.mine_impostors =
      static_cast<int>(parse_integer(expect_key(in, "mine_impostors", path)));
  cfg.seed = static_cast<std::uint64_t>(
      parse_integer(expect_key(in, "seed", path)));
  cfg.base.kind = metric_kind_from_string(expect_key(in, "base_kind", path));
  cfg.base.aggressiveness =
      parse_real(expect_key(in, "base_aggressiveness", path));
  cfg.base.iterations =
      static_cast<int>(parse_integer(expect_key(in, "base_iterations", path)));
  cfg.base.batch_step = parse_real(expect_key(in, "base_batch_step", path));
  cfg.base.pa_eta = parse_real(expect_key(in, "base_pa_eta", path));
  cfg.base.seed = static_cast<std::uint64_t>(
      parse_integer(expect_key(in, "base_seed", path)));
  cfg.solver.eta0 = parse_real(expect_key(in, "solver_eta0", path));
  cfg.solver.backtrack_shrink =
      parse_real(expect_key(in, "solver_backtrack_shrink", path));
  cfg.solver.max_iter =
      static_cast<int>(parse_integer(expect_key(in, "solver_max_iter", path)));
  cfg.solver.rel_tol = parse_real(expect_key(in, "solver_rel_tol", path));
  cfg.solver.lambda_t = cfg.lambda_t;

  EngineState state = make_engine(cfg);

  std::string key, a, b;
  if (!(in >> key >> a >> b) || key != "dictionary") {
    throw ParseError(path + ": expected dictionary section");
  }
  const long long dd = parse_integer(a);
  const long long dh = parse_integer(b);
  if (dd > 0) {
    LifelongDictionary dict;
    dict.L0 = read_matrix(in, static_cast<Index>(dd), static_cast<Index>(dh));
    state.dictionary = std::move(dict);
  }

  const long long m = parse_integer(expect_key(in, "tasks", path));
  for (long long i = 0; i < m; ++i) {
    TaskSummary s;
    if (!(in >> key) || key != "task") {
      throw ParseError(path + ": expected task entry");
    }
    if (!(in >> std::ws)) throw ParseError(path + ": truncated task entry");
    if (!std::getline(in, s.task_id) || s.task_id.empty()) {
      throw ParseError(path + ": missing task id");
    }
    s.kind = metric_kind_from_string(expect_key(in, "kind", path));
    s.delta.triplet_count = static_cast<std::size_t>(
        parse_integer(expect_key(in, "triplet_count", path)));
    if (!(in >> key >> a >> b) || key != "W") {
      throw ParseError(path + ": expected W matrix for task " + s.task_id);
    }
    s.W = read_matrix(in, static_cast<Index>(parse_integer(a)),
                      static_cast<Index>(parse_integer(b)));
    if (!(in >> key >> a >> b) || key != "delta") {
      throw ParseError(path + ": expected delta matrix for task " + s.task_id);
    }
    s.delta.delta = read_matrix(in, static_cast<Index>(parse_integer(a)),
                                static_cast<Index>(parse_integer(b)));
    state.tasks.emplace(s.task_id, std::move(s));
  }
  return state;
}

}  // namespace lml
