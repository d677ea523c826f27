#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sepdec/fast.hpp"
#include "sepdec/generators.hpp"

#include <cmath>

using namespace sepdec;

TEST_CASE("theta update") {
  CHECK(update_theta(1.0) == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-15));
  double theta = 1.0;
  for (int k = 0; k < 100; ++k) {
    const double next = update_theta(theta);
    CHECK(next < theta);
    CHECK(next > 0.0);
    theta = next;
  }
  CHECK_THROWS_AS(update_theta(0.0), DomainError);
  CHECK_THROWS_AS(update_theta(1.5), DomainError);
}

TEST_CASE("first iterate and the recursive r") {
  const SeparableProblem p = build_problem(gen_toy(2).data);
  const double t = 0.05;
  const FastGradientSolver solver(p, t, FastConfig{});
  Vector y0 = Vector::LinSpaced(p.m(), -0.3, 0.4);
  FastState s = solver.initialize(y0);
  CHECK(s.y == y0);
  CHECK(s.v == y0);
  CHECK(s.r == y0);
  CHECK(s.theta == 1.0);

  // r^k = y0 - sum_i rho_i grad g(v^i), and r^k = (v^k - (1 - theta_k) y^k) / theta_k.
  Vector r_sum = y0;
  for (int k = 0; k < 60; ++k) {
    const Vector grad = s.eval.gradient;
    solver.iterate(s);
    r_sum -= s.rho * grad;
    CHECK((s.r - r_sum).norm() <= 1e-12 * (1.0 + r_sum.norm()));
    const Vector r_from_state = (s.v - (1.0 - s.theta) * s.y) / s.theta;
    CHECK((s.r - r_from_state).norm() <= 1e-12 * (1.0 + s.r.norm()) / s.theta);
  }
}

TEST_CASE("coefficient form of the v update") {
  // Eliminating r and grad g(v) = (v - y_+) / alpha from the r-form gives
  // v_+ = b1 y_+ + b2 y + b3 v with b1 = 1 - theta_+ + rho theta_+ / alpha,
  // b2 = -(1 - theta) theta_+ / theta and b3 = (1 / theta - rho / alpha) theta_+.
  // The opposite signs on the rho / alpha terms do not reproduce the update.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SeparableProblem p = build_problem(gen_toy(seed).data);
    const FastGradientSolver solver(p, 0.05, FastConfig{});
    FastState s = solver.initialize(Vector::Zero(p.m()));
    for (int k = 0; k < 40; ++k) {
      const Vector y = s.y, v = s.v;
      const double theta = s.theta;
      solver.iterate(s);
      const double tp = s.theta, ratio = s.rho / s.alpha;
      const double b2 = -(1.0 - theta) * tp / theta;
      const Vector fixed = (1.0 - tp + ratio * tp) * s.y + b2 * y + (1.0 / theta - ratio) * tp * v;
      const double scale = 1.0 + s.v.norm() + y.norm() + v.norm();
      CHECK((fixed - s.v).norm() <= 1e-10 * scale);
      if (k > 0 && (s.y - v).norm() > 1e-6) {
        const Vector flipped =
            (1.0 - tp - ratio * tp) * s.y + b2 * y + (1.0 / theta + ratio) * tp * v;
        CHECK((flipped - s.v).norm() > 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("one-step estimate inside the entry region") {
  const double t = 0.05;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SeparableProblem p = build_problem(gen_toy(seed).data);
    const oracle::Reference ref = oracle::dual_newton(p, t, 1e-10);
    const FastGradientSolver solver(p, t, FastConfig{});
    FastState s = solver.initialize(Vector::Zero(p.m()));
    double g_y = s.eval.g_value;
    for (int k = 0; k < 200 && s.lambda > 1e-9; ++k) {
      const bool inside = solver.in_region(s);
      const double theta = s.theta, c2 = s.c_hat * s.c_hat;
      const double before = (1.0 - theta) / (theta * theta) * (g_y - ref.g) +
                            c2 / t * (s.r - ref.y).squaredNorm();
      solver.iterate(s);
      g_y = evaluate(p, s.y, t).g_value;
      const double after = (g_y - ref.g) / (theta * theta) + c2 / t * (s.r - ref.y).squaredNorm();
      if (inside) {
        CHECK(after <= before + 1e-7 * std::max(1.0, std::abs(before)));
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("starting at the dual minimizer") {
  const SeparableProblem p = build_problem(gen_toy(6).data);
  const double t = 0.1;
  const oracle::Reference ref = oracle::dual_newton(p, t, 1e-11);
  FastConfig fc;
  fc.eps_g = 1e-9;
  fc.normalized_optim = false;
  const FastGradientSolver solver(p, t, fc);
  const RunResult r = solver.solve(ref.y);
  CHECK(r.status == RunStatus::converged);
  CHECK(r.iterations == 0);

  FastState s = solver.initialize(ref.y);
  for (int k = 0; k < 5; ++k) solver.iterate(s);
  CHECK((s.y - ref.y).norm() <= 1e-10);
  CHECK((s.v - ref.y).norm() <= 1e-10);
}

TEST_CASE("fewer oracle calls than fixed-t path following") {
  const double t = 0.05;
  int fewer = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SeparableProblem p = build_problem(gen_toy(seed).data);
    FastConfig fc;
    fc.max_iter = 100000;
    const RunResult fast = FastGradientSolver(p, t, fc).solve(Vector::Zero(p.m()));
    PfgdConfig pc;
    pc.t0 = t;
    pc.eps_t = t;
    pc.fixed_t = true;
    pc.max_iter = 100000;
    const RunResult slow = PathFollowingSolver(p, pc).solve();
    REQUIRE(fast.status == RunStatus::converged);
    fewer += slow.status == RunStatus::failed || fast.oracle_calls < slow.oracle_calls;
  }
  CHECK(fewer == 20);
}

TEST_CASE("explicit c_hat below the entry threshold") {
  const SeparableProblem p = build_problem(gen_toy(1).data);
  const double lambda0 = evaluate(p, Vector::Zero(p.m()), 0.1).lambda;
  FastConfig fc;
  fc.c_hat = lambda0;  // needs lambda0 <= 3/4 c_hat
  CHECK_THROWS_AS(FastGradientSolver(p, 0.1, fc).initialize(Vector::Zero(p.m())),
                  EntryConditionError);
  fc.c_hat = 2.0 * lambda0;
  CHECK_NOTHROW(FastGradientSolver(p, 0.1, fc).initialize(Vector::Zero(p.m())));
  CHECK_THROWS_AS(FastGradientSolver(p, 0.0, FastConfig{}), std::invalid_argument);
}

TEST_CASE("region exits are marked") {
  const SeparableProblem p = build_problem(gen_toy(9).data);
  FastConfig fc;
  fc.max_iter = 300;
  const RunResult r = FastGradientSolver(p, 0.05, fc).solve(Vector::Zero(p.m()));
  int marked = 0;
  for (const TraceRow& row : r.rows) {
    CHECK(row.outside_region == (row.lambda > 0.75 * r.c_hat));
    marked += row.outside_region;
  }
  CHECK(marked == r.region_violations);
}

TEST_CASE("switching exits phase 1 at once when the start is already inside") {
  const SeparableProblem p = build_problem(gen_toy(5).data);
  SwitchConfig sc;
  sc.pfgd.t0 = 0.01;
  sc.pfgd.eps_t = 0.01;
  const RunResult r = switching_solve(p, sc);
  CHECK(r.switch_row == 0);
  for (const TraceRow& row : r.rows) CHECK(row.phase == 2);
  CHECK(r.final_t == 0.01);
}

TEST_CASE("switching boundary on the toy suite") {
  int converged = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SeparableProblem p = build_problem(gen_toy(seed).data);
    SwitchConfig sc;
    sc.pfgd.ca_mode = CaMode::adaptive;
    sc.pfgd.min_sigma = 1e-2;
    const RunResult r = switching_solve(p, sc);
    if (r.status != RunStatus::converged) continue;
    ++converged;
    REQUIRE(r.switch_row >= 1);
    const TraceRow& last = r.rows[static_cast<std::size_t>(r.switch_row - 1)];
    CHECK(last.phase == 1);
    CHECK(last.t <= sc.pfgd.eps_t);
    CHECK(last.lambda <= 0.75 * r.c_hat);
    CHECK(r.final_t == last.t);
    for (std::size_t i = static_cast<std::size_t>(r.switch_row); i < r.rows.size(); ++i)
      CHECK(r.rows[i].t == last.t);
  }
  CHECK(converged == 20);
}

TEST_CASE("switching on an exponential instance with 200 rows and 1000 columns") {
  GeneratorSpec spec;
  spec.family = Family::exp_l1;
  spec.m = 200;
  spec.n = 1000;
  spec.seed = 1;
  const SeparableProblem p = build_problem(generate(spec).data);
  SwitchConfig sc;
  sc.max_iter = 10000;
  const RunResult r = switching_solve(p, sc);
  CHECK(r.status == RunStatus::converged);
  CHECK(r.final_optim <= 1e-3);
  CHECK(r.final_t <= 1e-2);
  CHECK(r.iterations <= 10000);
}
