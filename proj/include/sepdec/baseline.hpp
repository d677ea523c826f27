#pragma once

#include "sepdec/problem.hpp"
#include "sepdec/trace.hpp"

namespace sepdec {

/// Maximizer of phi_i(x) + s^T x over the closed box of component i (no
/// barrier). Separable pieces are solved per coordinate; quadratic blocks by
/// cyclic coordinate ascent.
Vector maximize_unsmoothed(const Component& component, const VectorRef& s, double tol = 1e-12);

struct DualEval {
  Vector x;
  double g_value = 0.0;  // g(y)
  Vector subgradient;    // A x - b
};

/// Unsmoothed dual g(y) with one of its subgradients.
DualEval evaluate_unsmoothed(const SeparableProblem& problem, const VectorRef& y, int workers = 1);

struct SubgradientConfig {
  double step = 1.0;  // y_{k+1} = y_k - step / sqrt(k+1) * d_k / ||d_k||
  double eps_g = 1e-3;
  int max_iter = 10000;
  int workers = 1;
};

/// Dual subgradient method with ergodic primal averaging (weights = step
/// lengths). optim = ||A xbar - b|| / max(1, ||A x(y0) - b||). The trace uses the
/// gradient schema; lambda holds ||A xbar - b|| and t is 0.
RunResult subgradient_baseline(const SeparableProblem& problem, const SubgradientConfig& config);

}  // namespace sepdec
