#include "lml/task_solver.hpp"

#include "lml/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace lml {
namespace {

void check_shapes(const LifelongDictionary& dict, const Matrix& W,
                  const Matrix& M_star, const char* op) {
  if (W.rows() != dict.d() || W.cols() != dict.d()) {
    throw ShapeError(std::string(op) + ": W is " + std::to_string(W.rows()) +
                     "x" + std::to_string(W.cols()) + ", expected " +
                     std::to_string(dict.d()) + "x" + std::to_string(dict.d()));
  }
  if (M_star.rows() != dict.d_hat() || M_star.cols() != dict.d_hat()) {
    throw ShapeError(std::string(op) + ": M_star is " +
                     std::to_string(M_star.rows()) + "x" +
                     std::to_string(M_star.cols()) + ", expected " +
                     std::to_string(dict.d_hat()) + "x" +
                     std::to_string(dict.d_hat()));
  }
}

double offdiag_l1(const Matrix& W) {
  double acc = 0.0;
  for (Index i = 0; i < W.rows(); ++i) {
    for (Index j = 0; j < W.cols(); ++j) {
      if (i != j) acc += std::abs(W(i, j));
    }
  }
  return acc;
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.lambda_t >= 0.0) || !std::isfinite(cfg.lambda_t)) {
    throw ConfigError("solver: lambda_t must be finite and >= 0");
  }
  if (!(cfg.eta0 > 0.0)) throw ConfigError("solver: eta0 must be > 0");
  if (!(cfg.backtrack_shrink > 0.0) || !(cfg.backtrack_shrink < 1.0)) {
    throw ConfigError("solver: backtrack_shrink must be in (0, 1)");
  }
  if (cfg.max_iter < 1) throw ConfigError("solver: max_iter must be >= 1");
  if (!(cfg.rel_tol > 0.0)) throw ConfigError("solver: rel_tol must be > 0");
}

Matrix smooth_gradient(const LifelongDictionary& dict, const Matrix& W,
                       const Matrix& M_star) {
  check_shapes(dict, W, M_star, "smooth_gradient");
  const Matrix gram = dict.L0 * dict.L0.transpose();
  return gram * W * gram - dict.L0 * M_star * dict.L0.transpose();
}

Matrix prox_l1_off(const Matrix& W, double threshold) {
  if (W.rows() != W.cols()) {
    throw ShapeError("prox_l1_off: matrix must be square");
  }
  Matrix out = W;
  for (Index i = 0; i < W.rows(); ++i) {
    for (Index j = 0; j < W.cols(); ++j) {
      if (i == j) continue;
      const double w = W(i, j);
      const double mag = std::abs(w) - threshold;
      out(i, j) = mag > 0.0 ? (w < 0.0 ? -mag : mag) : 0.0;
    }
  }
  return out;
}

double objective(const LifelongDictionary& dict, const Matrix& W,
                 const Matrix& M_star, double lambda_t) {
  check_shapes(dict, W, M_star, "objective");
  const double fit =
      0.5 * (dict.L0.transpose() * W * dict.L0 - M_star).squaredNorm();
  return fit + lambda_t * offdiag_l1(W);
}

SolveResult solve_weights(const LifelongDictionary& dict, const Matrix& M_star,
                          const Matrix& W_init, const SolverConfig& cfg,
                          std::ostream* trace) {
  validate(cfg);
  check_shapes(dict, W_init, M_star, "solve_weights");

  const Matrix gram = dict.L0 * dict.L0.transpose();
  const Matrix linear = dict.L0 * M_star * dict.L0.transpose();
  auto smooth_value = [&](const Matrix& V) {
    return 0.5 * (dict.L0.transpose() * V * dict.L0 - M_star).squaredNorm();
  };

  FistaState st;
  st.W_curr = W_init;
  st.W_prev = W_init;
  st.t_prev = 0.0;
  st.t_curr = 1.0;
  st.eta = cfg.eta0;

  const double f_init = smooth_value(W_init);
  const double F_init = f_init + cfg.lambda_t * offdiag_l1(W_init);
  if (!std::isfinite(F_init)) {
    throw DivergenceError("solve_weights: non-finite objective at W_init");
  }
  st.objective_history.push_back(F_init);
  Matrix best_W = W_init;
  double best_F = F_init;

  for (int i = 1; i <= cfg.max_iter; ++i) {
    st.iter = i;
    const double t_next =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * st.t_curr * st.t_curr));
    const double alpha = (st.t_curr - 1.0) / t_next;
    const Matrix V = st.W_curr + alpha * (st.W_curr - st.W_prev);
    const Matrix grad_V = gram * V * gram - linear;
    const double f_V = smooth_value(V);

    // shrink eta until f(p) <= f(V) + <p-V, grad> + ||p-V||^2 / (2 eta);
    // the nonsmooth term cancels from both sides of the spec condition
    Matrix p;
    double f_p = 0.0;
    int halvings = 0;
    for (;;) {
      p = prox_l1_off(V - st.eta * grad_V, cfg.lambda_t * st.eta);
      f_p = smooth_value(p);
      const Matrix diff = p - V;
      const double quad = f_V + diff.cwiseProduct(grad_V).sum() +
                          diff.squaredNorm() / (2.0 * st.eta);
      if (f_p <= quad) break;
      st.eta *= cfg.backtrack_shrink;
      if (++halvings > 200 || !(st.eta > 0.0)) {
        throw DivergenceError(
            "solve_weights: backtracking failed at iteration " +
            std::to_string(i));
      }
    }

    const double F_p = f_p + cfg.lambda_t * offdiag_l1(p);
    if (!std::isfinite(F_p)) {
      throw DivergenceError("solve_weights: non-finite objective at iteration " +
                            std::to_string(i));
    }

    st.W_prev = st.W_curr;
    st.W_curr = p;
    st.t_prev = st.t_curr;
    st.t_curr = t_next;
    st.objective_history.push_back(F_p);
    if (trace) *trace << i << ' ' << st.eta << ' ' << F_p << '\n';

    // FISTA is non-monotone; convergence is judged on the best objective
    const double prev_best = best_F;
    if (F_p < best_F) {
      best_F = F_p;
      best_W = p;
    }
    if (prev_best - best_F <=
        cfg.rel_tol * std::max(1.0, std::abs(prev_best))) {
      st.converged = true;
      break;
    }
  }

  st.best_objective = best_F;
  return {std::move(best_W), std::move(st)};
}

}  // namespace lml
