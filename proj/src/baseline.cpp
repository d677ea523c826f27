#include "sepdec/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sepdec {
namespace {

// Maximizer of the concave -f(x) - w|x| + s x on [l, u], where df is f'.
template <class Df>
double maximize_piece(Df df, double w, double s, double l, double u, double tol) {
  auto right = [&](double x) { return s - df(x) - (x >= 0.0 ? w : -w); };  // right derivative
  auto left = [&](double x) { return s - df(x) - (x > 0.0 ? w : -w); };    // left derivative
  if (right(l) <= 0.0) return l;
  if (left(u) >= 0.0) return u;
  if (l < 0.0 && u > 0.0 && left(0.0) >= 0.0 && right(0.0) <= 0.0) return 0.0;
  double lo = l, hi = u;
  if (l < 0.0 && u > 0.0) {
    if (right(0.0) > 0.0) lo = 0.0;
    else hi = 0.0;
  }
  while (hi - lo > tol * (u - l)) {
    const double mid = 0.5 * (lo + hi);
    if (right(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Vector maximize_unsmoothed(const Component& component, const VectorRef& s, double tol) {
  const BoxBarrier* box = component.box();
  if (box == nullptr) throw std::invalid_argument("maximize_unsmoothed: box components only");
  const Objective& obj = component.objective;
  const int n = component.dimension();
  Vector x(n);
  if (obj.separable()) {
    for (int j = 0; j < n; ++j)
      x(j) = maximize_piece([&](double v) { return obj.df_1d(j, v); }, obj.l1_weight(), s(j),
                            box->lower()(j), box->upper()(j), tol);
    return x;
  }
  // max -(0.5 x^T Q x + c^T x) + s^T x over the box.
  const Matrix& q = obj.q();
  const Vector lin = s - obj.coefficients();
  x = box->center();
  for (int sweep = 0; sweep < 100000; ++sweep) {
    double change = 0.0;
    for (int j = 0; j < n; ++j) {
      const double rest = lin(j) - q.row(j).dot(x) + q(j, j) * x(j);
      const double next =
          std::clamp(rest / q(j, j), box->lower()(j), box->upper()(j));
      change = std::max(change, std::abs(next - x(j)));
      x(j) = next;
    }
    if (change <= tol) break;
  }
  return x;
}

DualEval evaluate_unsmoothed(const SeparableProblem& problem, const VectorRef& y, int workers) {
  const int count = problem.num_components();
  std::vector<Vector> parts(static_cast<std::size_t>(count));
  std::vector<std::string> errors(static_cast<std::size_t>(count));
#pragma omp parallel for num_threads(workers > 0 ? workers : 1) schedule(static)
  for (int i = 0; i < count; ++i) {
    try {
      const Component& c = problem.component(i);
      parts[i] = maximize_unsmoothed(c, c.a.transpose() * y);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (int i = 0; i < count; ++i)
    if (!errors[i].empty()) throw std::runtime_error("component " + std::to_string(i) + ": " + errors[i]);

  DualEval out;
  out.x.resize(problem.n());
  out.subgradient = -problem.b();
  for (int i = 0; i < count; ++i) {
    const Component& c = problem.component(i);
    out.x.segment(problem.offset(i), c.dimension()) = parts[i];
    const Vector ax = c.a * parts[i];
    out.subgradient += ax;
    out.g_value += c.objective.value(parts[i]) + y.dot(ax - c.b);
  }
  return out;
}

RunResult subgradient_baseline(const SeparableProblem& problem, const SubgradientConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  RunResult result;
  result.solver = "subgrad";
  Vector y = Vector::Zero(problem.m());
  Vector x_avg = Vector::Zero(problem.n());
  double weight = 0.0;
  double lambda_ref = 1.0;
  bool done = false;

  for (int k = 0; k < config.max_iter && !done; ++k) {
    const DualEval eval = evaluate_unsmoothed(problem, y, config.workers);
    ++result.oracle_calls;
    const double d_norm = eval.subgradient.norm();
    if (k == 0) lambda_ref = std::max(1.0, d_norm);

    const double alpha = config.step / std::sqrt(k + 1.0);
    weight += alpha;
    x_avg += (alpha / weight) * (eval.x - x_avg);
    if (d_norm == 0.0) x_avg = eval.x;  // x(y) is already primal optimal
    const double residual = (problem.a() * x_avg - problem.b()).norm();

    TraceRow row;
    row.k = k;
    row.lambda = residual;
    row.g = eval.g_value;
    row.alpha = alpha;
    row.optim = residual / lambda_ref;
    result.iterations = k + 1;
    done = row.optim <= config.eps_g || d_norm == 0.0;
    if (!done) y -= (alpha / d_norm) * eval.subgradient;
    row.ms = elapsed_ms();
    result.rows.push_back(row);
    result.final_lambda = residual;
    result.final_optim = row.optim;
    result.residual = residual;
  }
  result.status = done ? RunStatus::converged : RunStatus::failed;
  result.y = y;
  result.x = x_avg;
  result.wall_ms = elapsed_ms();
  return result;
}

}  // namespace sepdec
