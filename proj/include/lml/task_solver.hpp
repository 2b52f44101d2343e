#pragma once

#include "lml/dictionary.hpp"
#include "lml/types.hpp"

#include <iosfwd>
#include <vector>

namespace lml {

struct SolverConfig {
  double lambda_t = 0.01;        // off-diagonal l1 weight, >= 0
  double eta0 = 1.0;             // initial stepsize, > 0
  double backtrack_shrink = 0.5; // in (0, 1)
  int max_iter = 500;
  double rel_tol = 1e-6;
};

void validate(const SolverConfig& cfg);

struct FistaState {
  Matrix W_curr;
  Matrix W_prev;
  double t_curr = 1.0;
  double t_prev = 0.0;
  double eta = 1.0;
  int iter = 0;
  std::vector<double> objective_history;  // composite objective per accepted iterate
  double best_objective = 0.0;
  bool converged = false;
};

/// Gradient of f(W) = 1/2 ||L0' W L0 - M*||_F^2:
///   L0 L0' W L0 L0' - L0 M* L0'.
Matrix smooth_gradient(const LifelongDictionary& dict, const Matrix& W,
                       const Matrix& M_star);

/// Soft-thresholds the off-diagonal entries by `threshold`; the diagonal is
/// returned unchanged. Total function (no failure modes).
Matrix prox_l1_off(const Matrix& W, double threshold);

/// 1/2 ||L0' W L0 - M*||_F^2 + lambda_t * sum_{i != j} |w_ij|.
double objective(const LifelongDictionary& dict, const Matrix& W,
                 const Matrix& M_star, double lambda_t);

struct SolveResult {
  Matrix W;  // best-objective iterate
  FistaState state;
};

/// FISTA with backtracking on the composite objective. Search points are
/// V = W_i + alpha_i (W_i - W_{i-1}) with alpha_i = (t_{i-1}-1)/t_i and
/// t_i = (1 + sqrt(1 + 4 t_{i-1}^2))/2; eta carries over between outer
/// iterations and only shrinks. The loop stops when the running best
/// objective improves by less than rel_tol (relative), or at max_iter with
/// state.converged = false. If `trace` is given, one line per outer
/// iteration is written: "iter eta objective".
SolveResult solve_weights(const LifelongDictionary& dict, const Matrix& M_star,
                          const Matrix& W_init, const SolverConfig& cfg,
                          std::ostream* trace = nullptr);

}  // namespace lml
