#include "sepdec/generators.hpp"

#include "sepdec/rng.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace sepdec {
namespace {

using ComponentData = ProblemData::ComponentData;

ComponentData scalar_component(const Matrix& a, int j, const Vector& b_share, double lower,
                               double upper) {
  ComponentData c;
  c.n = 1;
  c.a.assign(a.col(j).data(), a.col(j).data() + a.rows());
  c.b.assign(b_share.data(), b_share.data() + b_share.size());
  c.lower = {lower};
  c.upper = {upper};
  return c;
}

nlohmann::json base_metadata(const GeneratorSpec& spec) {
  return {{"family", to_string(spec.family)}, {"seed", spec.seed}, {"m", spec.m},
          {"n", spec.n}, {"l1_weight", spec.l1_weight}, {"lower", spec.lower},
          {"upper", spec.upper}};
}

void check_box(const GeneratorSpec& spec) {
  if (!(spec.lower < spec.upper) || !std::isfinite(spec.lower) || !std::isfinite(spec.upper))
    throw std::invalid_argument("generator: box must satisfy lower < upper");
  if (spec.m < 1 || spec.n < 1) throw std::invalid_argument("generator: m, n must be >= 1");
  if (spec.l1_weight < 0.0) throw std::invalid_argument("generator: l1 weight must be >= 0");
}

}  // namespace

const char* to_string(Family family) {
  switch (family) {
    case Family::basis_pursuit: return "basis_pursuit";
    case Family::exp_l1: return "exp_l1";
    case Family::toy: return "toy";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "basis_pursuit") return Family::basis_pursuit;
  if (name == "exp_l1") return Family::exp_l1;
  if (name == "toy") return Family::toy;
  throw std::invalid_argument("unknown family \"" + name + "\"");
}

GeneratedProblem gen_basis_pursuit(const GeneratorSpec& spec) {
  check_box(spec);
  if (spec.m >= spec.n) throw std::invalid_argument("basis_pursuit: requires m < n");
  if (spec.k < 0 || spec.k > spec.n) throw std::invalid_argument("basis_pursuit: k out of range");
  if (!(spec.lower < -2.0 && spec.upper > 2.0))
    throw std::invalid_argument("basis_pursuit: box must contain [-2, 2]");
  Rng rng(spec.seed);

  Matrix gauss(spec.n, spec.m);
  for (int j = 0; j < spec.m; ++j)
    for (int i = 0; i < spec.n; ++i) gauss(i, j) = rng.normal();
  const Eigen::HouseholderQR<Matrix> qr(gauss);
  const Matrix q = qr.householderQ() * Matrix::Identity(spec.n, spec.m);
  const Matrix a = q.transpose();

  Vector x0 = Vector::Zero(spec.n);
  for (int j : rng.sample(spec.n, spec.k)) {
    const double magnitude = rng.uniform(0.5, 2.0);
    x0(j) = rng.uniform() < 0.5 ? -magnitude : magnitude;
  }
  const Vector b = a * x0;
  const Vector share = b / static_cast<double>(spec.n);

  GeneratedProblem out;
  out.data.m = spec.m;
  for (int j = 0; j < spec.n; ++j) {
    ComponentData c = scalar_component(a, j, share, spec.lower, spec.upper);
    c.kind = "zero";
    c.l1_weight = spec.l1_weight;
    out.data.components.push_back(std::move(c));
  }
  out.data.metadata = base_metadata(spec);
  out.data.metadata["k"] = spec.k;
  out.x0 = std::move(x0);
  return out;
}

GeneratedProblem gen_exp_l1(const GeneratorSpec& spec) {
  check_box(spec);
  if (!(spec.lower < -2.0 && spec.upper > 2.0))
    throw std::invalid_argument("exp_l1: box must contain [-2, 2]");
  if (!(spec.density > 0.0 && spec.density <= 1.0) ||
      !(spec.gamma_density >= 0.0 && spec.gamma_density <= 1.0) || spec.gamma_max < 0.0)
    throw std::invalid_argument("exp_l1: densities must lie in (0, 1], gamma_max >= 0");
  Rng rng(spec.seed);

  Matrix a(spec.m, spec.n);
  for (int j = 0; j < spec.n; ++j)
    for (int i = 0; i < spec.m; ++i) a(i, j) = rng.uniform(-1.0, 1.0);
  a /= a.cwiseAbs().maxCoeff();

  const int nnz = std::max(1, static_cast<int>(std::lround(spec.density * spec.n)));
  Vector x0 = Vector::Zero(spec.n);
  for (int j : rng.sample(spec.n, nnz)) x0(j) = rng.uniform(-2.0, 2.0);

  const int rate_nnz = static_cast<int>(std::lround(spec.gamma_density * spec.n));
  Vector rates = Vector::Zero(spec.n);
  for (int j : rng.sample(spec.n, rate_nnz)) rates(j) = rng.uniform(0.0, spec.gamma_max);

  const Vector b = a * x0;
  const Vector share = b / static_cast<double>(spec.n);

  GeneratedProblem out;
  out.data.m = spec.m;
  for (int j = 0; j < spec.n; ++j) {
    ComponentData c = scalar_component(a, j, share, spec.lower, spec.upper);
    c.kind = "exp";
    c.coeffs = {rates(j)};
    c.l1_weight = spec.l1_weight;
    out.data.components.push_back(std::move(c));
  }
  out.data.metadata = base_metadata(spec);
  out.data.metadata["density"] = spec.density;
  out.data.metadata["gamma_density"] = spec.gamma_density;
  out.data.metadata["gamma_max"] = spec.gamma_max;
  out.x0 = std::move(x0);
  return out;
}

namespace {

GeneratedProblem toy(std::uint64_t seed, bool scalar_only, int max_n) {
  Rng rng(seed);
  const int m = 1 + static_cast<int>(rng.index(3));
  const int target_n = scalar_only ? 1 + static_cast<int>(rng.index(max_n))
                                   : 3 + static_cast<int>(rng.index(6));

  std::vector<ComponentData> comps;
  std::vector<double> xbar;
  int n = 0;
  while (n < target_n) {
    const int remaining = target_n - n;
    const bool block = !scalar_only && remaining >= 2 && rng.uniform() < 0.35;
    const int dim = block ? 2 : 1;

    ComponentData c;
    c.n = dim;
    for (int j = 0; j < dim; ++j) {
      const double lo = -rng.uniform(0.5, 3.0);
      const double hi = rng.uniform(0.5, 3.0);
      c.lower.push_back(lo);
      c.upper.push_back(hi);
      xbar.push_back(lo + (hi - lo) * rng.uniform(0.2, 0.8));
    }
    c.a.resize(static_cast<std::size_t>(m * dim));
    for (double& v : c.a) v = rng.normal();

    if (block && rng.uniform() < 0.6) {
      c.kind = "quadratic";
      Matrix b(2, 2);
      for (int i = 0; i < 4; ++i) b.data()[i] = rng.normal();
      const Matrix q = b * b.transpose() + 0.1 * Matrix::Identity(2, 2);
      c.q.assign(q.data(), q.data() + 4);
      c.coeffs = {rng.normal(), rng.normal()};
    } else {
      const auto pick = rng.index(3);
      c.kind = pick == 0 ? "zero" : pick == 1 ? "affine" : "exp";
      for (int j = 0; j < dim && c.kind != "zero"; ++j)
        c.coeffs.push_back(c.kind == "affine" ? rng.normal() : rng.uniform(0.0, 1.0));
      c.l1_weight = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.1, 1.0);
    }
    comps.push_back(std::move(c));
    n += dim;
  }

  // b = A xbar, split evenly across components.
  Vector b = Vector::Zero(m);
  int off = 0;
  for (const ComponentData& c : comps) {
    for (int j = 0; j < c.n; ++j)
      for (int i = 0; i < m; ++i) b(i) += c.a[static_cast<std::size_t>(i * c.n + j)] * xbar[off + j];
    off += c.n;
  }
  const Vector share = b / static_cast<double>(comps.size());
  for (ComponentData& c : comps) c.b.assign(share.data(), share.data() + m);

  GeneratedProblem out;
  out.data.m = m;
  out.data.components = std::move(comps);
  out.data.metadata = {{"family", "toy"}, {"seed", seed}, {"m", m}, {"n", n}};
  out.x0 = Eigen::Map<const Vector>(xbar.data(), static_cast<Eigen::Index>(xbar.size()));
  return out;
}

}  // namespace

GeneratedProblem gen_toy(std::uint64_t seed) { return toy(seed, false, 0); }

GeneratedProblem gen_toy_scalar(std::uint64_t seed, int max_n) {
  if (max_n < 1 || max_n > 6) throw std::invalid_argument("gen_toy_scalar: max_n in [1, 6]");
  return toy(seed, true, max_n);
}

GeneratedProblem generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case Family::basis_pursuit: return gen_basis_pursuit(spec);
    case Family::exp_l1: return gen_exp_l1(spec);
    case Family::toy: return gen_toy(spec.seed);
  }
  throw std::invalid_argument("generate: unknown family");
}

GridDual brute_force_dual(const SeparableProblem& problem, const VectorRef& y,
                          int resolution) {
  if (problem.n() > 6) throw std::invalid_argument("brute_force_dual: n must be <= 6");
  if (resolution < 1) throw std::invalid_argument("brute_force_dual: resolution must be >= 1");
  GridDual out;
  for (int i = 0; i < problem.num_components(); ++i) {
    const Component& comp = problem.component(i);
    const BoxBarrier* box = comp.box();
    if (comp.dimension() != 1 || box == nullptr || !comp.objective.separable())
      throw std::invalid_argument("brute_force_dual: components must be 1-D boxes");
    const double l = box->lower()(0);
    const double u = box->upper()(0);
    const double s = comp.a.col(0).dot(y);
    const Objective& obj = comp.objective;
    const double h = (u - l) / resolution;

    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= resolution; ++j) {
      const double x = j == resolution ? u : l + j * h;
      const double v = -obj.f_1d(0, x) - obj.l1_weight() * std::abs(x) + s * x;
      best = std::max(best, v);
    }
    // Lipschitz modulus of the piece over [l, u]; f' is monotone, so the
    // endpoints bound it.
    const double lip = std::abs(s) + obj.l1_weight() +
                       std::max(std::abs(obj.df_1d(0, l)), std::abs(obj.df_1d(0, u)));
    out.value += best - comp.b.dot(y);
    out.error_bound += lip * h / 2.0;
  }
  return out;
}

}  // namespace sepdec
