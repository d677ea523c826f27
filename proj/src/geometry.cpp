#include "sepdec/geometry.hpp"

#include <cmath>

namespace sepdec {
namespace {

// Applies H(x)^{-1} block by block.
class InverseHessian {
 public:
  InverseHessian(const SeparableProblem& problem, const VectorRef& x)
      : problem_(problem), x_(x) {
    if (!problem.contains(x)) throw DomainError("local_matrix_norm: x is not interior");
    if (problem.all_boxes()) {
      diag_.resize(problem.n());
      for (int i = 0; i < problem.num_components(); ++i) {
        const Component& c = problem.component(i);
        diag_.segment(problem.offset(i), c.dimension()) =
            c.barrier->hessian_diagonal(x.segment(problem.offset(i), c.dimension()));
      }
    }
  }

  Vector apply(const Vector& w) const {
    if (diag_.size() > 0) return w.cwiseQuotient(diag_);
    Vector out(w.size());
    for (int i = 0; i < problem_.num_components(); ++i) {
      const Component& c = problem_.component(i);
      const Eigen::Index off = problem_.offset(i);
      out.segment(off, c.dimension()) = c.barrier->solve_hessian(
          x_.segment(off, c.dimension()), w.segment(off, c.dimension()));
    }
    return out;
  }

 private:
  const SeparableProblem& problem_;
  const VectorRef x_;
  Vector diag_;
};

}  // namespace

NormEstimate local_matrix_norm(const SeparableProblem& problem, const VectorRef& x,
                               const PowerIterationOptions& options) {
  const InverseHessian h_inv(problem, x);
  const Matrix& a = problem.a();
  auto multiply = [&](const Vector& v) -> Vector {
    return a * h_inv.apply(a.transpose() * v);
  };

  NormEstimate est;
  Vector v = options.start.size() == problem.m() ? options.start
                                                  : Vector::Ones(problem.m());
  if (v.norm() == 0.0) v = Vector::Ones(problem.m());
  v.normalize();

  double rayleigh = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Vector mv = multiply(v);
    const double next = v.dot(mv);
    est.iterations = it;
    const double mv_norm = mv.norm();
    if (mv_norm == 0.0) {
      rayleigh = 0.0;
      est.converged = true;
      break;
    }
    const bool settled = it > 1 && std::abs(next - rayleigh) <= options.tol * std::abs(next);
    rayleigh = std::max(rayleigh, next);
    v = mv / mv_norm;
    if (settled) {
      est.converged = true;
      break;
    }
  }
  est.value = std::sqrt(std::max(rayleigh, 0.0));
  est.eigenvector = std::move(v);
  return est;
}

double local_matrix_norm(const SeparableProblem& problem, const VectorRef& x, double tol) {
  PowerIterationOptions options;
  options.tol = tol;
  return local_matrix_norm(problem, x, options).value;
}

GeometryConstants compute_constants(const SeparableProblem& problem, double tol) {
  GeometryConstants k;
  k.x_c = problem.center();
  k.kappa = aggregate_kappa(problem);
  k.all_boxes = problem.all_boxes();
  k.center_norm = local_matrix_norm(problem, k.x_c, tol);
  k.c_bar_a = k.kappa * k.center_norm;
  k.lambda_bar = k.c_bar_a + (problem.a() * k.x_c - problem.b()).norm();
  return k;
}

}  // namespace sepdec
