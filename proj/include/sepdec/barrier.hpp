#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>

namespace sepdec {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// omega(t) = t - ln(1 + t) on t >= 0.
double omega(double t);

/// omega_star(t) = -t - ln(1 - t) on [0, 1).
double omega_star(double t);

/// Thrown when a point lies on or outside the open domain of a barrier.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Self-concordant barrier over a bounded convex set with nonempty interior.
///
/// Values are normalized so that value(center()) == 0. Implementations are
/// immutable after construction and may be evaluated from several threads.
class Barrier {
 public:
  virtual ~Barrier() = default;

  virtual int dimension() const = 0;
  virtual double nu() const = 0;
  virtual bool contains(const VectorRef& x) const = 0;

  virtual double value(const VectorRef& x) const = 0;
  virtual Vector gradient(const VectorRef& x) const = 0;
  virtual Matrix hessian(const VectorRef& x) const = 0;

  /// True when the Hessian is diagonal everywhere (products of 1-D barriers).
  virtual bool has_diagonal_hessian() const { return false; }

  /// Diagonal of the Hessian; only meaningful when has_diagonal_hessian().
  virtual Vector hessian_diagonal(const VectorRef& x) const;

  /// Returns hessian(x)^{-1} rhs.
  virtual Vector solve_hessian(const VectorRef& x, const VectorRef& rhs) const;

  /// A strictly interior point used to start Newton iterations.
  virtual Vector interior_point() const = 0;

  /// Exact analytic center, when a closed form is available.
  virtual std::optional<Vector> closed_form_center() const { return std::nullopt; }

  /// The analytic center computed at construction.
  virtual const Vector& center() const = 0;
};

/// Product of intervals [l_j, u_j] with barrier
///   F(x) = sum_j -ln(x_j - l_j) - ln(u_j - x_j) + 2 ln((u_j - l_j) / 2),
/// a 2n-self-concordant barrier whose center is the midpoint.
class BoxBarrier final : public Barrier {
 public:
  BoxBarrier(Vector lower, Vector upper);
  BoxBarrier(double lower, double upper);

  int dimension() const override { return static_cast<int>(lower_.size()); }
  double nu() const override { return 2.0 * dimension(); }
  bool contains(const VectorRef& x) const override;

  double value(const VectorRef& x) const override;
  Vector gradient(const VectorRef& x) const override;
  Matrix hessian(const VectorRef& x) const override;

  bool has_diagonal_hessian() const override { return true; }
  Vector hessian_diagonal(const VectorRef& x) const override;
  Vector solve_hessian(const VectorRef& x, const VectorRef& rhs) const override;

  Vector interior_point() const override { return center_; }
  std::optional<Vector> closed_form_center() const override { return center_; }
  const Vector& center() const override { return center_; }

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  // Scalar kernels for coordinate j; no domain checks.
  double value_1d(int j, double x) const;
  double derivative_1d(int j, double x) const;
  double second_derivative_1d(int j, double x) const;

 private:
  Vector lower_;
  Vector upper_;
  Vector center_;
  Vector log_half_width_;
};

/// Logarithmic barrier F(x) = -sum_r ln(h_r - g_r^T x) of the polytope
/// {x : G x <= h}, nu = number of rows. The polytope must be bounded.
class PolytopeBarrier final : public Barrier {
 public:
  /// `interior` must satisfy G interior < h strictly.
  PolytopeBarrier(Matrix g, Vector h, Vector interior);

  int dimension() const override { return static_cast<int>(g_.cols()); }
  double nu() const override { return static_cast<double>(g_.rows()); }
  bool contains(const VectorRef& x) const override;

  double value(const VectorRef& x) const override;
  Vector gradient(const VectorRef& x) const override;
  Matrix hessian(const VectorRef& x) const override;

  Vector interior_point() const override { return interior_; }
  const Vector& center() const override { return center_; }

 private:
  Vector slack(const VectorRef& x) const;

  Matrix g_;
  Vector h_;
  Vector interior_;
  Vector center_;
  double offset_ = 0.0;
};

/// Analytic center of `barrier`: closed form when available, otherwise damped
/// Newton with step 1/(1 + decrement) from interior_point(), stopping when
/// the Newton decrement is <= 1e-10 and the gradient norm is <= tol.
/// Throws std::runtime_error after `max_iterations`.
Vector analytic_center(const Barrier& barrier, double tol = 1e-10,
                       int max_iterations = 200);

/// ||u||_x = sqrt(u^T H(x) u). Throws DomainError when x is not interior.
double local_norm(const Barrier& barrier, const VectorRef& x, const VectorRef& u);

/// ||u||*_x = sqrt(u^T H(x)^{-1} u). Throws DomainError when x is not interior.
double dual_local_norm(const Barrier& barrier, const VectorRef& x,
                       const VectorRef& u);

}  // namespace sepdec
