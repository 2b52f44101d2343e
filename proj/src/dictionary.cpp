#include "lml/dictionary.hpp"

#include "lml/errors.hpp"
#include "lml/matrix_io.hpp"
#include "lml/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace lml {
namespace {

// Lloyd's algorithm with k-means++ seeding; deterministic under rng.
Matrix kmeans_centers(const Matrix& X, int k, Rng& rng) {
  const Index n = X.rows();
  const Index dh = X.cols();
  Matrix centers(k, dh);

  std::vector<double> dist2(static_cast<std::size_t>(n),
                            std::numeric_limits<double>::infinity());
  centers.row(0) = X.row(static_cast<Index>(rng.uniform_index(n)));
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double d = (X.row(i) - centers.row(c - 1)).squaredNorm();
      auto& best = dist2[static_cast<std::size_t>(i)];
      best = std::min(best, d);
      total += best;
    }
    if (total <= 0.0) {
      centers.row(c) = X.row(static_cast<Index>(rng.uniform_index(n)));
      continue;
    }
    const double target = rng.uniform() * total;
    double acc = 0.0;
    Index chosen = n - 1;
    for (Index i = 0; i < n; ++i) {
      acc += dist2[static_cast<std::size_t>(i)];
      if (acc >= target) {
        chosen = i;
        break;
      }
    }
    centers.row(c) = X.row(chosen);
  }

  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (X.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (X.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed) break;

    Matrix sums = Matrix::Zero(k, dh);
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += X.row(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) {
        // reseed an empty cluster to the point farthest from its center
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double d =
              (X.row(i) - centers.row(assign[static_cast<std::size_t>(i)]))
                  .squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers.row(c) = X.row(far);
      } else {
        centers.row(c) =
            sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }
  }
  return centers;
}

struct Candidate {
  Vector direction;  // unit norm
  double score = 0.0;
};

void check_summaries(const LifelongDictionary& dict,
                     const std::vector<TaskSummary>& summaries,
                     const char* op) {
  if (summaries.empty()) {
    throw ConfigError(std::string(op) + ": no task summaries");
  }
  for (const TaskSummary& s : summaries) {
    if (s.W.rows() != dict.d() || s.W.cols() != dict.d()) {
      throw ShapeError(std::string(op) + ": task '" + s.task_id + "' W is " +
                       std::to_string(s.W.rows()) + "x" +
                       std::to_string(s.W.cols()) + ", expected " +
                       std::to_string(dict.d()) + "x" +
                       std::to_string(dict.d()));
    }
    if (s.delta.delta.rows() != dict.d_hat() ||
        s.delta.delta.cols() != dict.d_hat()) {
      throw ShapeError(std::string(op) + ": task '" + s.task_id +
                       "' delta is " + std::to_string(s.delta.delta.rows()) +
                       "x" + std::to_string(s.delta.delta.cols()) +
                       ", expected " + std::to_string(dict.d_hat()) + "x" +
                       std::to_string(dict.d_hat()));
    }
  }
}

}  // namespace

LifelongDictionary init_dictionary(const LabeledDataset& first_task, Index d,
                                   int num_clusters,
                                   const std::vector<int>& J_scales,
                                   std::uint64_t seed) {
  const Index dh = first_task.dim();
  if (d < 1 || d > dh) {
    throw ConfigError("init_dictionary: d must be in [1, " +
                      std::to_string(dh) + "], got " + std::to_string(d));
  }
  if (num_clusters < 1) {
    throw ConfigError("init_dictionary: num_clusters must be >= 1");
  }
  if (J_scales.empty() ||
      std::any_of(J_scales.begin(), J_scales.end(), [](int j) { return j < 1; })) {
    throw ConfigError("init_dictionary: J_scales must be non-empty and >= 1");
  }

  std::map<int, std::vector<Index>> members;
  for (Index i = 0; i < first_task.size(); ++i) {
    members[first_task.y[static_cast<std::size_t>(i)]].push_back(i);
  }
  if (members.size() < 2) {
    throw ConfigError("init_dictionary: first task needs >=2 classes");
  }
  const Index num_classes = static_cast<Index>(members.size());

  Rng rng(seed);
  const int k = static_cast<int>(
      std::min<Index>(num_clusters, first_task.size()));
  const Matrix centers = kmeans_centers(first_task.X, k, rng);

  std::set<int> clamped_scales;
  std::vector<Candidate> candidates;
  std::vector<std::pair<double, Index>> ranked;
  for (int c = 0; c < k; ++c) {
    for (int J : J_scales) {
      // the J nearest points of each class around this center
      std::vector<Index> subset;
      for (const auto& [label, idxs] : members) {
        ranked.clear();
        for (Index i : idxs) {
          ranked.emplace_back(
              (first_task.X.row(i) - centers.row(c)).squaredNorm(), i);
        }
        std::sort(ranked.begin(), ranked.end());
        const std::size_t take = std::min<std::size_t>(J, ranked.size());
        if (take < static_cast<std::size_t>(J)) clamped_scales.insert(J);
        for (std::size_t p = 0; p < take; ++p) {
          subset.push_back(ranked[p].second);
        }
      }

      // Fisher scatter matrices over the local subset
      Vector mean = Vector::Zero(dh);
      for (Index i : subset) mean += first_task.X.row(i).transpose();
      mean /= static_cast<double>(subset.size());

      Matrix Sw = Matrix::Zero(dh, dh);
      Matrix Sb = Matrix::Zero(dh, dh);
      for (const auto& [label, idxs] : members) {
        std::vector<Index> local;
        for (Index i : subset) {
          if (first_task.y[static_cast<std::size_t>(i)] == label) {
            local.push_back(i);
          }
        }
        if (local.empty()) continue;
        Vector cmean = Vector::Zero(dh);
        for (Index i : local) cmean += first_task.X.row(i).transpose();
        cmean /= static_cast<double>(local.size());
        for (Index i : local) {
          const Vector diff = first_task.X.row(i).transpose() - cmean;
          Sw.noalias() += diff * diff.transpose();
        }
        const Vector gap = cmean - mean;
        Sb.noalias() +=
            static_cast<double>(local.size()) * gap * gap.transpose();
      }

      double eps = 1e-6 * Sw.trace() / static_cast<double>(dh);
      if (!(eps > 0.0)) eps = 1e-12;
      Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(
          Sb, Sw + eps * Matrix::Identity(dh, dh));
      if (es.info() != Eigen::Success) continue;

      const Vector& evals = es.eigenvalues();  // ascending
      const double scale = std::max(1.0, std::abs(evals(dh - 1)));
      const Index harvest = std::min(num_classes - 1, dh);
      for (Index e = 0; e < harvest; ++e) {
        const Index idx = dh - 1 - e;
        if (evals(idx) <= 1e-8 * scale) break;
        Vector dir = es.eigenvectors().col(idx);
        const double norm = dir.norm();
        if (!(norm > 0.0) || !dir.allFinite()) continue;
        candidates.push_back({dir / norm, evals(idx)});
      }
    }
  }

  for (int J : clamped_scales) {
    log_warning("init_dictionary: J=" + std::to_string(J) +
                " exceeds a class size; clamped");
  }

  // rank by eigenvalue, keep ties in generation order
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.score > b.score;
                   });

  std::vector<Vector> rows;
  for (const Candidate& cand : candidates) {
    bool duplicate = false;
    for (const Vector& row : rows) {
      if (std::abs(cand.direction.dot(row)) > 0.99) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) rows.push_back(cand.direction);
    if (static_cast<Index>(rows.size()) == d) break;
  }
  if (static_cast<Index>(rows.size()) < d) {
    throw ConfigError(
        "init_dictionary: only " + std::to_string(rows.size()) +
        " distinct basis candidates harvested for d=" + std::to_string(d) +
        "; use a smaller d or more clusters");
  }

  LifelongDictionary dict;
  dict.L0.resize(d, dh);
  for (Index r = 0; r < d; ++r) {
    dict.L0.row(r) = rows[static_cast<std::size_t>(r)].transpose();
  }
  return dict;
}

Matrix dictionary_gradient(const LifelongDictionary& dict,
                           const std::vector<TaskSummary>& summaries,
                           double gamma, bool symmetrized) {
  check_summaries(dict, summaries, "dictionary_gradient");
  Matrix g = Matrix::Zero(dict.d(), dict.d_hat());
  for (const TaskSummary& s : summaries) {
    const Matrix proj = dict.L0 * s.delta.delta;
    if (symmetrized) {
      g.noalias() += s.W * (dict.L0 * s.delta.delta.transpose());
      g.noalias() += s.W.transpose() * proj;
    } else {
      g.noalias() += s.W.transpose() * proj;
    }
  }
  g /= static_cast<double>(summaries.size());
  g += gamma * dict.L0;
  return g;
}

LifelongDictionary refine_dictionary(const LifelongDictionary& dict,
                                     const std::vector<TaskSummary>& summaries,
                                     double gamma, double step, int steps,
                                     bool symmetrized) {
  if (!(step > 0.0)) throw ConfigError("refine_dictionary: step must be > 0");
  if (steps < 1) throw ConfigError("refine_dictionary: steps must be >= 1");
  LifelongDictionary out = dict;
  for (int s = 1; s <= steps; ++s) {
    out.L0 -= step * dictionary_gradient(out, summaries, gamma, symmetrized);
    if (!out.L0.allFinite()) {
      throw DivergenceError("refine_dictionary: non-finite dictionary after "
                            "step " + std::to_string(s) +
                            "; reduce the step size");
    }
  }
  return out;
}

double dictionary_surrogate(const LifelongDictionary& dict,
                            const std::vector<TaskSummary>& summaries,
                            double gamma) {
  check_summaries(dict, summaries, "dictionary_surrogate");
  double acc = 0.0;
  for (const TaskSummary& s : summaries) {
    const Matrix fit = dict.L0.transpose() * s.W * dict.L0;
    if (s.m_star.size() > 0) {
      acc += (fit - s.m_star).squaredNorm();
    } else {
      acc += s.delta.delta.cwiseProduct(fit).sum();  // tr(Delta' L0' W L0)
    }
  }
  acc /= static_cast<double>(summaries.size());
  return acc + gamma * dict.L0.squaredNorm();
}

LifelongDictionary refine_dictionary_linesearch(
    const LifelongDictionary& dict, const std::vector<TaskSummary>& summaries,
    double gamma, double step, int steps, int max_halvings) {
  if (!(step > 0.0)) {
    throw ConfigError("refine_dictionary_linesearch: step must be > 0");
  }
  if (steps < 1) {
    throw ConfigError("refine_dictionary_linesearch: steps must be >= 1");
  }
  LifelongDictionary out = dict;
  double current = dictionary_surrogate(out, summaries, gamma);
  double eta = step;
  for (int s = 0; s < steps; ++s) {
    const Matrix g = dictionary_gradient(out, summaries, gamma);
    bool accepted = false;
    for (int h = 0; h <= max_halvings; ++h) {
      LifelongDictionary trial{out.L0 - eta * g};
      if (trial.L0.allFinite()) {
        const double value = dictionary_surrogate(trial, summaries, gamma);
        if (value <= current) {
          out = std::move(trial);
          current = value;
          accepted = true;
          break;
        }
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // no descent available along this gradient
  }
  return out;
}

void save_dictionary(const LifelongDictionary& dict, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << dict.d() << ' ' << dict.d_hat() << '\n';
  write_matrix(out, dict.L0);
  if (!out) throw ConfigError("write failed: " + path);
}

LifelongDictionary load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dictionary: " + path);
  std::string a, b;
  if (!(in >> a >> b)) throw ParseError(path + ": missing 'd d_hat' header");
  const long long d = parse_integer(a);
  const long long dh = parse_integer(b);
  if (d < 1 || dh < 1 || d > dh) {
    throw ParseError(path + ": invalid header d=" + a + " d_hat=" + b);
  }
  LifelongDictionary dict;
  dict.L0 = read_matrix(in, static_cast<Index>(d), static_cast<Index>(dh));
  if (!dict.L0.allFinite()) {
    throw ParseError(path + ": non-finite dictionary entries");
  }
  return dict;
}

}  // namespace lml
