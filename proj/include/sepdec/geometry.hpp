#pragma once

#include "sepdec/problem.hpp"

namespace sepdec {

/// Result of a power-iteration estimate of ||A||*_x.
struct NormEstimate {
  double value = 0.0;   // sqrt(lambda_max(A H(x)^{-1} A^T))
  bool converged = false;
  int iterations = 0;
  Vector eigenvector;   // unit-norm dominant direction, usable as a warm start
};

struct PowerIterationOptions {
  double tol = 1e-8;          // relative change of the Rayleigh quotient
  int max_iterations = 1000;
  /// Start vector; empty means the normalized all-ones vector.
  Vector start;
};

/// ||A||*_x = sup{ sqrt(v^T A H(x)^{-1} A^T v) : ||v||_2 = 1 }, by power
/// iteration on M = A H(x)^{-1} A^T with block-diagonal Hessian solves.
/// Throws DomainError if x is not interior. On stagnation the best estimate is
/// returned with converged == false.
NormEstimate local_matrix_norm(const SeparableProblem& problem, const VectorRef& x,
                               const PowerIterationOptions& options = {});

/// Convenience overload returning only the value.
double local_matrix_norm(const SeparableProblem& problem, const VectorRef& x, double tol);

/// A-priori constants of the dual iteration.
struct GeometryConstants {
  double kappa = 0.0;        // sum_i (nu_i + 2 sqrt(nu_i))
  double center_norm = 0.0;  // ||A||*_{x_c}
  double c_bar_a = 0.0;      // kappa * ||A||*_{x_c}
  double lambda_bar = 0.0;   // kappa * ||A||*_{x_c} + ||A x_c - b||_2
  Vector x_c;
  bool all_boxes = false;

  /// Upper bound on ||A||*_x over the whole interior. For products of interval
  /// barriers the Hessian is smallest at the center, so ||A||*_{x_c} already
  /// bounds it; otherwise this is c_bar_a.
  double uniform_bound() const { return all_boxes ? center_norm : c_bar_a; }
};

GeometryConstants compute_constants(const SeparableProblem& problem, double tol = 1e-10);

}  // namespace sepdec
