#pragma once

#include "sepdec/problem.hpp"

#include <stdexcept>
#include <string>

namespace sepdec {

/// One evaluation of the barrier-smoothed dual g(y; t) and its gradient.
struct SmoothedDualEval {
  Vector y;
  double t = 0.0;
  Vector x_star;          // concatenated maximizer x*(y; t), strictly interior
  double g_value = 0.0;   // g(y; t)
  Vector gradient;        // A x* - b
  double barrier_value = 0.0;  // c_F = F(x*)
  double lambda = 0.0;         // ||gradient||_2
};

struct OracleOptions {
  /// Relative accuracy of the subproblem solves.
  double tol = 1e-12;
  /// Worker threads for the per-component fan-out; <= 0 means all cores.
  int workers = 1;
  int max_newton_iterations = 200;
};

/// Raised when a primal subproblem cannot be solved to tolerance.
class SubproblemError : public std::runtime_error {
 public:
  SubproblemError(int component, const std::string& what)
      : std::runtime_error("component " + std::to_string(component) + ": " + what),
        component_(component) {}
  int component() const { return component_; }

 private:
  int component_;
};

/// A scalar piece  -f(x) - l1 |x| + s x - t F(x)  on the open interval (lower, upper)
/// with F the normalized interval barrier.
struct ScalarPiece {
  ObjectiveKind kind = ObjectiveKind::zero;  // zero | affine | exp
  double coefficient = 0.0;                  // c for affine, rate for exp
  double l1_weight = 0.0;
  double lower = -1.0;
  double upper = 1.0;

  double f(double x) const;
  double df(double x) const;
};

/// Coordinate j of a separable component over a box.
ScalarPiece scalar_piece(const Component& component, int j);

/// Maximizer of the scalar piece. The kink at 0 is decided from the
/// sub-differential interval; otherwise the half-interval whose endpoint
/// derivatives bracket zero is bisected to width <= tol * (upper - lower).
double solve_scalar_bisection(const ScalarPiece& piece, double s, double t, double tol);

/// Same maximizer for zero/affine pieces, via the quadratic obtained by
/// clearing the barrier denominators in the stationarity condition.
double solve_scalar_closed_form(const ScalarPiece& piece, double s, double t);

/// Dispatches to the closed form for zero/affine pieces, bisection otherwise.
double solve_scalar_subproblem(const ScalarPiece& piece, double s, double t, double tol);

/// Maximizer of phi_i(x) + s^T x - t F_i(x) for a component whose objective
/// is smooth (no l1 term), by Newton's method from the analytic center with steps
/// kept inside the domain and Armijo backtracking. Stops when
/// ||grad phi_i + s - t grad F_i||_2 <= tol * (1 + ||s||_2), or when the Newton
/// step is below tol times the box width. Throws std::runtime_error on
/// non-convergence.
Vector solve_smooth_subproblem(const Component& component, const VectorRef& s, double t,
                               double tol, int max_iterations = 200);

/// x_i*(y; t) for component i given s_i = A_i^T y, dispatched on its route.
Vector solve_component(const Component& component, const VectorRef& s, double t,
                       const OracleOptions& options);

/// Solves all N subproblems in parallel and assembles g(y; t), its gradient,
/// F(x*) and lambda. Reductions run in component index order, so the result
/// does not depend on the number of workers. Throws SubproblemError carrying
/// the lowest failing component index.
SmoothedDualEval evaluate(const SeparableProblem& problem, const VectorRef& y, double t,
                          const OracleOptions& options = {});

}  // namespace sepdec
