#include "sepdec/problem.hpp"

#include <Eigen/QR>

#include <cmath>
#include <sstream>

namespace sepdec {

Objective::Objective(ObjectiveKind kind, int dimension, double l1_weight)
    : kind_(kind), dimension_(dimension), l1_weight_(l1_weight) {
  if (dimension <= 0) throw std::invalid_argument("Objective: dimension must be positive");
  if (!(l1_weight >= 0.0) || !std::isfinite(l1_weight))
    throw std::invalid_argument("Objective: l1 weight must be finite and nonnegative");
}

Objective Objective::zero(int dimension, double l1_weight) {
  return Objective(ObjectiveKind::zero, dimension, l1_weight);
}

Objective Objective::affine(Vector c, double l1_weight) {
  Objective obj(ObjectiveKind::affine, static_cast<int>(c.size()), l1_weight);
  obj.coefficients_ = std::move(c);
  return obj;
}

Objective Objective::exponential(Vector rates, double l1_weight) {
  Objective obj(ObjectiveKind::exp, static_cast<int>(rates.size()), l1_weight);
  if ((rates.array() < 0.0).any())
    throw std::invalid_argument("Objective: exponential rates must be nonnegative");
  obj.coefficients_ = std::move(rates);
  return obj;
}

Objective Objective::quadratic(Matrix q, Vector c) {
  Objective obj(ObjectiveKind::quadratic, static_cast<int>(c.size()), 0.0);
  if (q.rows() != c.size() || q.cols() != c.size())
    throw std::invalid_argument("Objective: Q must be square and match c");
  obj.q_ = 0.5 * (q + q.transpose());
  obj.coefficients_ = std::move(c);
  return obj;
}

double Objective::f_1d(int j, double x) const {
  switch (kind_) {
    case ObjectiveKind::zero: return 0.0;
    case ObjectiveKind::affine: return coefficients_[j] * x;
    case ObjectiveKind::exp: return std::expm1(-coefficients_[j] * x);
    case ObjectiveKind::quadratic: break;
  }
  throw std::logic_error("f_1d called on a non-separable objective");
}

double Objective::df_1d(int j, double x) const {
  switch (kind_) {
    case ObjectiveKind::zero: return 0.0;
    case ObjectiveKind::affine: return coefficients_[j];
    case ObjectiveKind::exp: {
      const double r = coefficients_[j];
      return -r * std::exp(-r * x);
    }
    case ObjectiveKind::quadratic: break;
  }
  throw std::logic_error("df_1d called on a non-separable objective");
}

double Objective::smooth_value(const VectorRef& x) const {
  if (kind_ == ObjectiveKind::quadratic)
    return 0.5 * x.dot(q_ * x) + coefficients_.dot(x);
  double sum = 0.0;
  for (int j = 0; j < dimension_; ++j) sum += f_1d(j, x[j]);
  return sum;
}

Vector Objective::smooth_gradient(const VectorRef& x) const {
  if (kind_ == ObjectiveKind::quadratic) return q_ * x + coefficients_;
  Vector g(dimension_);
  for (int j = 0; j < dimension_; ++j) g[j] = df_1d(j, x[j]);
  return g;
}

Matrix Objective::smooth_hessian(const VectorRef& x) const {
  switch (kind_) {
    case ObjectiveKind::quadratic: return q_;
    case ObjectiveKind::exp: {
      Vector d(dimension_);
      for (int j = 0; j < dimension_; ++j) {
        const double r = coefficients_[j];
        d[j] = r * r * std::exp(-r * x[j]);
      }
      return d.asDiagonal();
    }
    default: return Matrix::Zero(dimension_, dimension_);
  }
}

double Objective::value(const VectorRef& x) const {
  return -smooth_value(x) - l1_weight_ * x.lpNorm<1>();
}

const char* to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::zero: return "zero";
    case ObjectiveKind::affine: return "affine";
    case ObjectiveKind::exp: return "exp";
    case ObjectiveKind::quadratic: return "quadratic";
  }
  return "?";
}

// ---------------------------------------------------------------------------

const BoxBarrier* Component::box() const {
  return dynamic_cast<const BoxBarrier*>(barrier.get());
}

SubproblemRoute Component::route() const {
  if (box() != nullptr && objective.separable()) {
    return objective.kind() == ObjectiveKind::exp ? SubproblemRoute::scalar_bisection
                                                  : SubproblemRoute::scalar_closed_form;
  }
  if (objective.l1_weight() == 0.0) return SubproblemRoute::smooth_newton;
  return SubproblemRoute::unsupported;
}

// ---------------------------------------------------------------------------

SeparableProblem::SeparableProblem(int m, std::vector<Component> components)
    : m_(m), components_(std::move(components)) {
  if (m <= 0) throw std::invalid_argument("SeparableProblem: m must be positive");
  if (components_.empty())
    throw std::invalid_argument("SeparableProblem: need at least one component");

  offsets_.reserve(components_.size() + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Component& c = components_[i];
    const std::string where = "component " + std::to_string(i) + ": ";
    if (!c.barrier) throw std::invalid_argument(where + "missing barrier");
    if (c.a.rows() != m || c.a.cols() == 0)
      throw std::invalid_argument(where + "A_i must be m x n_i with n_i > 0");
    if (c.b.size() != m) throw std::invalid_argument(where + "b_i must have length m");
    if (c.barrier->dimension() != c.dimension())
      throw std::invalid_argument(where + "barrier dimension differs from n_i");
    if (c.objective.dimension() != c.dimension())
      throw std::invalid_argument(where + "objective dimension differs from n_i");
    if (c.box() == nullptr) all_boxes_ = false;
    offsets_.push_back(offsets_.back() + c.dimension());
  }

  a_.resize(m, offsets_.back());
  b_ = Vector::Zero(m);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    a_.middleCols(offsets_[i], components_[i].dimension()) = components_[i].a;
    b_ += components_[i].b;
  }
}

Vector SeparableProblem::center() const {
  Vector xc(n());
  for (int i = 0; i < num_components(); ++i)
    xc.segment(offsets_[i], components_[i].dimension()) = components_[i].barrier->center();
  return xc;
}

double SeparableProblem::objective_value(const VectorRef& x) const {
  double sum = 0.0;
  for (int i = 0; i < num_components(); ++i)
    sum += components_[i].objective.value(x.segment(offsets_[i], components_[i].dimension()));
  return sum;
}

double SeparableProblem::barrier_value(const VectorRef& x) const {
  double sum = 0.0;
  for (int i = 0; i < num_components(); ++i)
    sum += components_[i].barrier->value(x.segment(offsets_[i], components_[i].dimension()));
  return sum;
}

bool SeparableProblem::contains(const VectorRef& x) const {
  if (x.size() != n()) return false;
  for (int i = 0; i < num_components(); ++i)
    if (!components_[i].barrier->contains(x.segment(offsets_[i], components_[i].dimension())))
      return false;
  return true;
}

// ---------------------------------------------------------------------------

bool ValidationReport::ok() const {
  for (const auto& issue : issues)
    if (issue.severity == ValidationIssue::Severity::error) return false;
  return true;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& issue : issues) {
    out << (issue.severity == ValidationIssue::Severity::error ? "error" : "warning");
    if (issue.component >= 0) out << " [component " << issue.component << "]";
    out << ": " << issue.message << '\n';
  }
  return out.str();
}

ValidationReport validate(const SeparableProblem& problem) {
  ValidationReport report;
  using Severity = ValidationIssue::Severity;

  for (int i = 0; i < problem.num_components(); ++i) {
    const Component& c = problem.component(i);
    if (!(c.barrier->nu() > 0.0))
      report.issues.push_back({Severity::error, i, "barrier parameter must be positive"});
    if (c.route() == SubproblemRoute::unsupported)
      report.issues.push_back(
          {Severity::error, i, "l1 term requires a box-constrained separable objective"});
  }

  if (problem.m() > problem.n()) {
    report.issues.push_back({Severity::warning, -1,
                             "A has more rows than columns and cannot have full row rank"});
  } else {
    Eigen::ColPivHouseholderQR<Matrix> qr(problem.a().transpose());
    if (qr.rank() < problem.m())
      report.issues.push_back({Severity::warning, -1,
                               "A is rank deficient (rank " + std::to_string(qr.rank()) +
                                   " < m = " + std::to_string(problem.m()) + ")"});
  }
  return report;
}

double aggregate_kappa(const SeparableProblem& problem) {
  double kappa = 0.0;
  for (const Component& c : problem.components()) {
    const double nu = c.barrier->nu();
    kappa += nu + 2.0 * std::sqrt(nu);
  }
  return kappa;
}

}  // namespace sepdec
