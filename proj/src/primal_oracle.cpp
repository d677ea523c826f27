#include "sepdec/primal_oracle.hpp"

#include <Eigen/Cholesky>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <vector>

namespace sepdec {
namespace {

double barrier_derivative(const ScalarPiece& p, double x) {
  return -1.0 / (x - p.lower) + 1.0 / (p.upper - x);
}

// Derivative of the piece on the branch where sign(x) = sign.
double branch_derivative(const ScalarPiece& p, double x, double sign, double s, double t) {
  return -p.df(x) - p.l1_weight * sign + s - t * barrier_derivative(p, x);
}

struct Bracket {
  double lo;
  double hi;
  double sign;  // sign(x) on (lo, hi)
};

// Either the kink point 0 or the branch holding the maximizer.
struct KinkDecision {
  std::optional<double> at_kink;
  Bracket bracket;
};

KinkDecision locate(const ScalarPiece& p, double s, double t) {
  if (p.lower >= 0.0) return {std::nullopt, {p.lower, p.upper, 1.0}};
  if (p.upper <= 0.0) return {std::nullopt, {p.lower, p.upper, -1.0}};
  if (p.l1_weight == 0.0) {
    // No kink: still split at 0 so the bracket sign is well-defined.
    const double d0 = branch_derivative(p, 0.0, 0.0, s, t);
    if (d0 == 0.0) return {0.0, {}};
    return d0 > 0.0 ? KinkDecision{std::nullopt, {0.0, p.upper, 1.0}}
                    : KinkDecision{std::nullopt, {p.lower, 0.0, -1.0}};
  }
  const double right = branch_derivative(p, 0.0, 1.0, s, t);
  const double left = branch_derivative(p, 0.0, -1.0, s, t);
  if (right <= 0.0 && left >= 0.0) return {0.0, {}};
  return right > 0.0 ? KinkDecision{std::nullopt, {0.0, p.upper, 1.0}}
                     : KinkDecision{std::nullopt, {p.lower, 0.0, -1.0}};
}

// For tiny t the maximizer can sit closer to a bound than one ulp.
double strictly_inside(const ScalarPiece& p, double x) {
  return std::clamp(x, std::nextafter(p.lower, p.upper), std::nextafter(p.upper, p.lower));
}

double bisect(const ScalarPiece& p, const Bracket& br, double s, double t, double tol) {
  const double width = tol * (p.upper - p.lower);
  double lo = br.lo;
  double hi = br.hi;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (branch_derivative(p, mid, br.sign, s, t) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return strictly_inside(p, 0.5 * (lo + hi));
}

}  // namespace

double ScalarPiece::f(double x) const {
  switch (kind) {
    case ObjectiveKind::affine: return coefficient * x;
    case ObjectiveKind::exp: return std::expm1(-coefficient * x);
    default: return 0.0;
  }
}

double ScalarPiece::df(double x) const {
  switch (kind) {
    case ObjectiveKind::affine: return coefficient;
    case ObjectiveKind::exp: return -coefficient * std::exp(-coefficient * x);
    default: return 0.0;
  }
}

ScalarPiece scalar_piece(const Component& component, int j) {
  const BoxBarrier* box = component.box();
  if (box == nullptr || !component.objective.separable())
    throw std::invalid_argument("scalar_piece: component is not a separable box component");
  const Objective& obj = component.objective;
  ScalarPiece piece;
  piece.kind = obj.kind();
  piece.coefficient = obj.kind() == ObjectiveKind::zero ? 0.0 : obj.coefficients()[j];
  piece.l1_weight = obj.l1_weight();
  piece.lower = box->lower()[j];
  piece.upper = box->upper()[j];
  return piece;
}

double solve_scalar_bisection(const ScalarPiece& piece, double s, double t, double tol) {
  const KinkDecision where = locate(piece, s, t);
  if (where.at_kink) return *where.at_kink;
  return bisect(piece, where.bracket, s, t, tol);
}

double solve_scalar_closed_form(const ScalarPiece& piece, double s, double t) {
  if (piece.kind == ObjectiveKind::exp)
    throw std::invalid_argument("solve_scalar_closed_form: exp pieces have no closed form");
  const KinkDecision where = locate(piece, s, t);
  if (where.at_kink) return *where.at_kink;
  const Bracket& br = where.bracket;

  // a + t/(x - l) - t/(u - x) = 0, multiplied through by (x - l)(u - x) > 0:
  //   -a x^2 + (a (l + u) - 2t) x + (t (l + u) - a l u) = 0.
  const double l = piece.lower;
  const double u = piece.upper;
  const double c = piece.kind == ObjectiveKind::affine ? piece.coefficient : 0.0;
  const double a = s - c - piece.l1_weight * br.sign;
  double root = 0.5 * (l + u);
  if (a != 0.0) {
    const double qa = -a;
    const double qb = a * (l + u) - 2.0 * t;
    const double qc = t * (l + u) - a * l * u;
    const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    const double r1 = q / qa;
    const double r2 = q != 0.0 ? qc / q : r1;
    root = (r1 > l && r1 < u) ? r1 : r2;
  }
  // Rounding can push a root sitting next to the kink onto the wrong side.
  if (!(root > br.lo && root < br.hi))
    return bisect(piece, br, s, t, std::numeric_limits<double>::epsilon());
  return strictly_inside(piece, root);
}

double solve_scalar_subproblem(const ScalarPiece& piece, double s, double t, double tol) {
  if (piece.kind == ObjectiveKind::exp) return solve_scalar_bisection(piece, s, t, tol);
  return solve_scalar_closed_form(piece, s, t);
}

Vector solve_smooth_subproblem(const Component& component, const VectorRef& s, double t,
                               double tol, int max_iterations) {
  const Objective& obj = component.objective;
  const Barrier& barrier = *component.barrier;
  if (obj.l1_weight() != 0.0)
    throw std::invalid_argument("solve_smooth_subproblem: objective has an l1 term");

  auto merit = [&](const Vector& x) {
    return -obj.smooth_value(x) + s.dot(x) - t * barrier.value(x);
  };
  const double scale = 1.0 + s.norm();
  const BoxBarrier* box = component.box();
  const double width = box ? (box->upper() - box->lower()).maxCoeff()
                           : 1.0 + barrier.center().norm();

  auto residual_at = [&](const Vector& x) {
    return Vector(-obj.smooth_gradient(x) + s - t * barrier.gradient(x));
  };

  // A box coordinate one ulp from a bound is held there when the residual or
  // the Newton step pushes it outward: the maximizer is closer to the face
  // than doubles resolve, and the barrier curvature there is rounding noise.
  auto at_edge = [&](const Vector& x, Eigen::Index j, double direction) {
    if (!box) return false;
    const double lo = box->lower()[j], hi = box->upper()[j];
    return (direction > 0.0 && x[j] >= std::nextafter(hi, lo)) ||
           (direction < 0.0 && x[j] <= std::nextafter(lo, hi));
  };
  // Newton step on the coordinates not held, Jacobi-scaled before factoring.
  auto newton_step = [&](const Vector& x, const Vector& residual, std::vector<bool>& held) {
    const Matrix curvature = obj.smooth_hessian(x) + t * barrier.hessian(x);
    for (;;) {
      std::vector<Eigen::Index> free;
      for (Eigen::Index j = 0; j < x.size(); ++j)
        if (!held[j]) free.push_back(j);
      const Eigen::Index nf = static_cast<Eigen::Index>(free.size());
      Vector step = Vector::Zero(x.size());
      if (nf == 0) return step;
      Matrix sub(nf, nf);
      Vector d(nf), r(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        d[a] = 1.0 / std::sqrt(curvature(free[a], free[a]));
        r[a] = residual[free[a]];
      }
      for (Eigen::Index a = 0; a < nf; ++a)
        for (Eigen::Index b = 0; b < nf; ++b) sub(a, b) = d[a] * curvature(free[a], free[b]) * d[b];
      Eigen::LLT<Matrix> llt(sub);
      if (llt.info() != Eigen::Success)
        throw std::runtime_error("curvature matrix is not positive definite");
      const Vector z = llt.solve(d.cwiseProduct(r));
      bool changed = false;
      for (Eigen::Index a = 0; a < nf; ++a) {
        step[free[a]] = d[a] * z[a];
        if (at_edge(x, free[a], step[free[a]])) held[free[a]] = changed = true;
      }
      if (!changed) return step;
    }
  };
  auto free_residual = [&](const Vector& residual, const std::vector<bool>& held) {
    double sq = 0.0;
    for (Eigen::Index j = 0; j < residual.size(); ++j)
      if (!held[j]) sq += residual[j] * residual[j];
    return std::sqrt(sq);
  };

  Vector x = barrier.center();
  double value = merit(x);
  Vector residual = residual_at(x);
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<bool> held(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) held[j] = at_edge(x, j, residual[j]);
    if (free_residual(residual, held) <= tol * scale) return x;
    const Vector step = newton_step(x, residual, held);
    const double slope = residual.dot(step);  // directional derivative of the merit
    if (!(slope > 0.0)) break;
    // For tiny t the residual has a rounding floor near t / dist^2 * eps; a
    // negligible step is the x-space test used by the scalar route.
    if (step.lpNorm<Eigen::Infinity>() <= tol * width) {
      const Vector last = x + step;
      return barrier.contains(last) ? last : x;
    }

    // Full Newton step, cut to 99% of the way to the boundary of a box.
    double eta = 1.0;
    if (box) {
      for (int j = 0; j < step.size(); ++j) {
        if (step[j] > 0.0) eta = std::min(eta, 0.99 * (box->upper()[j] - x[j]) / step[j]);
        if (step[j] < 0.0) eta = std::min(eta, 0.99 * (box->lower()[j] - x[j]) / step[j]);
      }
    }
    bool moved = false;
    for (int bt = 0; bt < 60 && !moved; ++bt, eta *= 0.5) {
      Vector trial = x + eta * step;
      if (box) {
        // Land on the last double inside rather than on the face itself.
        for (int j = 0; j < trial.size(); ++j)
          trial[j] = std::clamp(trial[j], std::nextafter(box->lower()[j], box->upper()[j]),
                                std::nextafter(box->upper()[j], box->lower()[j]));
      }
      if (trial == x) break;
      if (!barrier.contains(trial)) continue;
      const double trial_value = merit(trial);
      const bool ascent = trial_value >= value + 1e-4 * eta * slope;
      // Near the optimum the merit is flat to rounding; accept a smaller residual.
      const bool flat = std::abs(trial_value - value) <= 1e-14 * (1.0 + std::abs(value));
      Vector trial_residual;
      if (!ascent && flat) trial_residual = residual_at(trial);
      if (ascent || (flat && trial_residual.norm() < residual.norm())) {
        x = trial;
        value = trial_value;
        residual = ascent ? residual_at(x) : trial_residual;
        moved = true;
      }
    }
    if (!moved) {
      // No representable progress: accept x if only held coordinates remain.
      if (free_residual(residual, held) <= std::sqrt(tol) * scale) return x;
      break;
    }
  }
  if (residual.norm() <= std::sqrt(tol) * scale) return x;
  throw std::runtime_error("Newton did not converge (residual " +
                           std::to_string(residual.norm()) + ")");
}

Vector solve_component(const Component& component, const VectorRef& s, double t,
                       const OracleOptions& options) {
  switch (component.route()) {
    case SubproblemRoute::scalar_closed_form:
    case SubproblemRoute::scalar_bisection: {
      Vector x(component.dimension());
      for (int j = 0; j < component.dimension(); ++j)
        x[j] = solve_scalar_subproblem(scalar_piece(component, j), s[j], t, options.tol);
      return x;
    }
    case SubproblemRoute::smooth_newton:
      return solve_smooth_subproblem(component, s, t, options.tol,
                                     options.max_newton_iterations);
    case SubproblemRoute::unsupported: break;
  }
  throw std::runtime_error("no solver for this objective/barrier combination");
}

SmoothedDualEval evaluate(const SeparableProblem& problem, const VectorRef& y, double t,
                          const OracleOptions& options) {
  if (!(t > 0.0)) throw std::invalid_argument("evaluate: t must be positive");
  if (y.size() != problem.m()) throw std::invalid_argument("evaluate: y has wrong length");

  const int num = problem.num_components();
  const Vector s = problem.a().transpose() * y;

  SmoothedDualEval out;
  out.y = y;
  out.t = t;
  out.x_star.resize(problem.n());

  std::vector<double> values(num);
  std::vector<double> barriers(num);
  std::vector<std::exception_ptr> errors(num);
  const int workers = options.workers > 0 ? options.workers : omp_get_num_procs();

#pragma omp parallel for num_threads(workers) schedule(static)
  for (int i = 0; i < num; ++i) {
    try {
      const Component& c = problem.component(i);
      const Eigen::Index off = problem.offset(i);
      const auto si = s.segment(off, c.dimension());
      const Vector xi = solve_component(c, si, t, options);
      out.x_star.segment(off, c.dimension()) = xi;
      barriers[i] = c.barrier->value(xi);
      values[i] = c.objective.value(xi) + si.dot(xi) - y.dot(c.b) - t * barriers[i];
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }

  for (int i = 0; i < num; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw SubproblemError(i, e.what());
    }
  }

  double g = 0.0;
  double cf = 0.0;
  for (int i = 0; i < num; ++i) {
    g += values[i];
    cf += barriers[i];
  }
  out.g_value = g;
  out.barrier_value = cf;
  out.gradient = problem.a() * out.x_star - problem.b();
  out.lambda = out.gradient.norm();
  return out;
}

}  // namespace sepdec
