#include "sepdec/barrier.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

namespace sepdec {

double omega(double t) {
  if (!(t >= 0.0)) throw DomainError("omega: argument must be nonnegative");
  return t - std::log1p(t);
}

double omega_star(double t) {
  if (!(t >= 0.0) || t >= 1.0)
    throw DomainError("omega_star: argument must lie in [0, 1)");
  return -t - std::log1p(-t);
}

Vector Barrier::hessian_diagonal(const VectorRef& x) const {
  return hessian(x).diagonal();
}

Vector Barrier::solve_hessian(const VectorRef& x, const VectorRef& rhs) const {
  Eigen::LLT<Matrix> llt(hessian(x));
  if (llt.info() != Eigen::Success)
    throw DomainError("barrier Hessian is not positive definite");
  return llt.solve(rhs);
}

// ---------------------------------------------------------------------------

BoxBarrier::BoxBarrier(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0)
    throw std::invalid_argument("BoxBarrier: bound vectors must be nonempty and equal length");
  for (Eigen::Index j = 0; j < lower_.size(); ++j) {
    if (!(lower_[j] < upper_[j]) || !std::isfinite(lower_[j]) ||
        !std::isfinite(upper_[j]))
      throw std::invalid_argument("BoxBarrier: need finite l < u in coordinate " +
                                  std::to_string(j));
  }
  center_ = 0.5 * (lower_ + upper_);
  log_half_width_ = (0.5 * (upper_ - lower_)).array().log();
}

BoxBarrier::BoxBarrier(double lower, double upper)
    : BoxBarrier(Vector::Constant(1, lower), Vector::Constant(1, upper)) {}

bool BoxBarrier::contains(const VectorRef& x) const {
  if (x.size() != lower_.size()) return false;
  return ((x.array() > lower_.array()) && (x.array() < upper_.array())).all();
}

double BoxBarrier::value_1d(int j, double x) const {
  return -std::log(x - lower_[j]) - std::log(upper_[j] - x) +
         2.0 * log_half_width_[j];
}

double BoxBarrier::derivative_1d(int j, double x) const {
  return -1.0 / (x - lower_[j]) + 1.0 / (upper_[j] - x);
}

double BoxBarrier::second_derivative_1d(int j, double x) const {
  const double a = x - lower_[j];
  const double b = upper_[j] - x;
  return 1.0 / (a * a) + 1.0 / (b * b);
}

double BoxBarrier::value(const VectorRef& x) const {
  if (!contains(x)) throw DomainError("BoxBarrier: point outside open box");
  double sum = 0.0;
  for (int j = 0; j < dimension(); ++j) sum += value_1d(j, x[j]);
  return sum;
}

Vector BoxBarrier::gradient(const VectorRef& x) const {
  if (!contains(x)) throw DomainError("BoxBarrier: point outside open box");
  Vector g(dimension());
  for (int j = 0; j < dimension(); ++j) g[j] = derivative_1d(j, x[j]);
  return g;
}

Vector BoxBarrier::hessian_diagonal(const VectorRef& x) const {
  if (!contains(x)) throw DomainError("BoxBarrier: point outside open box");
  Vector d(dimension());
  for (int j = 0; j < dimension(); ++j) d[j] = second_derivative_1d(j, x[j]);
  return d;
}

Matrix BoxBarrier::hessian(const VectorRef& x) const {
  return hessian_diagonal(x).asDiagonal();
}

Vector BoxBarrier::solve_hessian(const VectorRef& x, const VectorRef& rhs) const {
  return rhs.cwiseQuotient(hessian_diagonal(x));
}

// ---------------------------------------------------------------------------

PolytopeBarrier::PolytopeBarrier(Matrix g, Vector h, Vector interior)
    : g_(std::move(g)), h_(std::move(h)), interior_(std::move(interior)) {
  if (g_.rows() != h_.size() || g_.cols() != interior_.size())
    throw std::invalid_argument("PolytopeBarrier: inconsistent dimensions");
  if (!contains(interior_))
    throw std::invalid_argument("PolytopeBarrier: starting point is not interior");
  center_ = analytic_center(*this);
  offset_ = -slack(center_).array().log().sum();
}

Vector PolytopeBarrier::slack(const VectorRef& x) const { return h_ - g_ * x; }

bool PolytopeBarrier::contains(const VectorRef& x) const {
  if (x.size() != g_.cols()) return false;
  return (slack(x).array() > 0.0).all();
}

double PolytopeBarrier::value(const VectorRef& x) const {
  if (!contains(x)) throw DomainError("PolytopeBarrier: point outside polytope");
  return -slack(x).array().log().sum() - offset_;
}

Vector PolytopeBarrier::gradient(const VectorRef& x) const {
  if (!contains(x)) throw DomainError("PolytopeBarrier: point outside polytope");
  return g_.transpose() * slack(x).cwiseInverse();
}

Matrix PolytopeBarrier::hessian(const VectorRef& x) const {
  if (!contains(x)) throw DomainError("PolytopeBarrier: point outside polytope");
  const Vector inv = slack(x).cwiseInverse();
  return g_.transpose() * inv.cwiseAbs2().asDiagonal() * g_;
}

// ---------------------------------------------------------------------------

Vector analytic_center(const Barrier& barrier, double tol, int max_iterations) {
  if (auto exact = barrier.closed_form_center()) return *exact;

  Vector x = barrier.interior_point();
  for (int it = 0; it < max_iterations; ++it) {
    const Vector grad = barrier.gradient(x);
    const Vector step = barrier.solve_hessian(x, grad);
    const double decrement = std::sqrt(std::max(0.0, grad.dot(step)));
    if (decrement <= 1e-10 && grad.norm() <= tol) return x;
    x -= step / (1.0 + decrement);
  }
  throw std::runtime_error("analytic_center: damped Newton did not converge in " +
                           std::to_string(max_iterations) + " iterations");
}

double local_norm(const Barrier& barrier, const VectorRef& x, const VectorRef& u) {
  if (!barrier.contains(x)) throw DomainError("local_norm: x is not interior");
  if (barrier.has_diagonal_hessian())
    return std::sqrt(u.cwiseAbs2().dot(barrier.hessian_diagonal(x)));
  return std::sqrt(u.dot(barrier.hessian(x) * u));
}

double dual_local_norm(const Barrier& barrier, const VectorRef& x,
                       const VectorRef& u) {
  if (!barrier.contains(x)) throw DomainError("dual_local_norm: x is not interior");
  return std::sqrt(u.dot(barrier.solve_hessian(x, u)));
}

}  // namespace sepdec
