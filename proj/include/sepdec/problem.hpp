#pragma once

#include "sepdec/barrier.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sepdec {

enum class ObjectiveKind { zero, affine, exp, quadratic };

/// How a component's primal subproblem is solved.
enum class SubproblemRoute {
  scalar_closed_form,  // separable 1-D pieces over a box: kink test + closed form
  scalar_bisection,    // separable 1-D pieces over a box: kink test + bisection
  smooth_newton,       // smooth objective: damped Newton on the optimality system
  unsupported,         // nonsmooth and not separable over a box
};

/// Concave objective phi(x) = -f(x) - l1_weight * ||x||_1 of one component.
///
/// The smooth part f is one of
///   zero:      f = 0
///   affine:    f = c^T x
///   exp:       f = sum_j exp(-rate_j x_j) - 1
///   quadratic: f = 0.5 x^T Q x + c^T x   (Q symmetric PSD, no l1 term)
class Objective {
 public:
  static Objective zero(int dimension, double l1_weight = 0.0);
  static Objective affine(Vector c, double l1_weight = 0.0);
  static Objective exponential(Vector rates, double l1_weight = 0.0);
  static Objective quadratic(Matrix q, Vector c);

  ObjectiveKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double l1_weight() const { return l1_weight_; }
  /// Linear coefficients (affine, quadratic) or rates (exp); empty for zero.
  const Vector& coefficients() const { return coefficients_; }
  const Matrix& q() const { return q_; }

  bool separable() const { return kind_ != ObjectiveKind::quadratic; }

  // Per-coordinate smooth part for separable kinds.
  double f_1d(int j, double x) const;
  double df_1d(int j, double x) const;

  double smooth_value(const VectorRef& x) const;
  Vector smooth_gradient(const VectorRef& x) const;
  Matrix smooth_hessian(const VectorRef& x) const;

  /// phi(x).
  double value(const VectorRef& x) const;

 private:
  Objective(ObjectiveKind kind, int dimension, double l1_weight);

  ObjectiveKind kind_;
  int dimension_;
  double l1_weight_;
  Vector coefficients_;
  Matrix q_;
};

const char* to_string(ObjectiveKind kind);

/// One block x_i of the separable program.
struct Component {
  Matrix a;  // m x n_i coupling block A_i
  Vector b;  // m-vector offset b_i
  Objective objective;
  std::shared_ptr<const Barrier> barrier;

  int dimension() const { return static_cast<int>(a.cols()); }
  /// The box barrier, or nullptr if X_i is not a box.
  const BoxBarrier* box() const;
  SubproblemRoute route() const;
};

/// max sum_i phi_i(x_i)  s.t.  sum_i (A_i x_i - b_i) = 0,  x_i in X_i.
///
/// Immutable after construction; safe to share between threads.
class SeparableProblem {
 public:
  /// Throws std::invalid_argument on inconsistent dimensions.
  SeparableProblem(int m, std::vector<Component> components);

  int m() const { return m_; }
  int n() const { return static_cast<int>(offsets_.back()); }
  int num_components() const { return static_cast<int>(components_.size()); }
  const Component& component(int i) const { return components_[i]; }
  const std::vector<Component>& components() const { return components_; }

  /// Start of component i inside the concatenated x.
  Eigen::Index offset(int i) const { return offsets_[i]; }

  /// Assembled A = [A_1, ..., A_N] and b = sum_i b_i.
  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }

  /// Concatenated analytic center.
  Vector center() const;
  bool all_boxes() const { return all_boxes_; }

  /// phi(x) and F(x) of a concatenated point.
  double objective_value(const VectorRef& x) const;
  double barrier_value(const VectorRef& x) const;
  bool contains(const VectorRef& x) const;

 private:
  int m_;
  std::vector<Component> components_;
  std::vector<Eigen::Index> offsets_;
  Matrix a_;
  Vector b_;
  bool all_boxes_ = true;
};

struct ValidationIssue {
  enum class Severity { warning, error };
  Severity severity;
  int component;  // -1 for problem-wide issues
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const;  // no errors; warnings allowed
  bool empty() const { return issues.empty(); }
  std::string to_string() const;
};

/// Rank deficiency of A and nonpositive barrier parameters.
ValidationReport validate(const SeparableProblem& problem);

/// sum_i (nu_i + 2 sqrt(nu_i)).
double aggregate_kappa(const SeparableProblem& problem);

}  // namespace sepdec
