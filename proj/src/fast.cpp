#include "sepdec/fast.hpp"

#include <chrono>
#include <cmath>

namespace sepdec {
namespace {

double c_bound(const GeometryConstants& constants, bool tight) {
  return tight ? constants.uniform_bound() : constants.c_bar_a;
}

}  // namespace

double update_theta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("update_theta: theta not in (0, 1]");
  return 0.5 * theta * (std::sqrt(theta * theta + 4.0) - theta);
}

FastGradientSolver::FastGradientSolver(const SeparableProblem& problem, double t,
                                       FastConfig config, GeometryConstants constants)
    : problem_(problem), t_(t), config_(std::move(config)), constants_(std::move(constants)) {
  if (!(t_ > 0.0)) throw std::invalid_argument("fast: t must be positive");
  if (!(config_.eps_g > 0.0)) throw std::invalid_argument("fast: eps_g must be positive");
  if (!(config_.entry_factor > 0.0 && config_.entry_factor < 1.0))
    throw std::invalid_argument("fast: entry factor must lie in (0, 1)");
}

FastGradientSolver::FastGradientSolver(const SeparableProblem& problem, double t,
                                       FastConfig config)
    : FastGradientSolver(problem, t, config, compute_constants(problem, config.norm_tol)) {}

FastState FastGradientSolver::initialize(const VectorRef& y0) const {
  if (y0.size() != problem_.m()) throw std::invalid_argument("fast: y0 has wrong length");
  return initialize(evaluate(problem_, y0, t_, config_.oracle));
}

FastState FastGradientSolver::initialize(const SmoothedDualEval& eval) const {
  FastState state;
  state.t = t_;
  state.y = eval.y;
  state.v = eval.y;
  state.r = eval.y;
  state.theta = 1.0;
  state.eval = eval;
  state.lambda = eval.lambda;
  if (config_.c_hat > 0.0) {
    state.c_hat = config_.c_hat;
    if (state.lambda > config_.entry_factor * state.c_hat)
      throw EntryConditionError("fast: initial gradient norm outside the entry region");
  } else {
    state.c_hat = std::max(c_bound(constants_, config_.tight_bound),
                           state.lambda / config_.entry_factor);
  }
  if (!config_.normalized_optim)
    state.lambda_ref = 1.0;
  else if (config_.lambda_ref > 0.0)
    state.lambda_ref = std::max(1.0, config_.lambda_ref);
  else
    state.lambda_ref = std::max(1.0, state.lambda);
  return state;
}

TraceRow FastGradientSolver::iterate(FastState& state) const {
  const Vector grad = state.eval.gradient;
  const double c = state.c_hat;
  const double theta = state.theta;

  // Step 2 keeps r in its recursive form: r^k = r^{k-1} - rho_{k-1} grad g(v^{k-1}).
  // Step 3.
  state.alpha = t_ / (c * (c + state.lambda));
  Vector y_next = state.v - state.alpha * grad;
  // Step 4.
  const double theta_next = update_theta(theta);
  // Step 5.
  state.rho = t_ / (2.0 * c * c * theta);
  state.r -= state.rho * grad;
  state.v = (1.0 - theta_next) * y_next + theta_next * state.r;
  state.y = std::move(y_next);
  state.theta = theta_next;
  // Step 6.
  state.eval = evaluate(problem_, state.v, t_, config_.oracle);
  state.lambda = state.eval.lambda;
  ++state.k;

  TraceRow row;
  row.k = state.k - 1;
  row.t = t_;
  row.lambda = state.lambda;
  row.g = state.eval.g_value;
  row.alpha = state.alpha;
  row.theta = state.theta;
  row.rho = state.rho;
  row.c_f = state.eval.barrier_value;
  row.c_a = c;
  row.optim = optim(state);
  row.outside_region = !in_region(state);
  return row;
}

double FastGradientSolver::optim(const FastState& state) const {
  return state.lambda / state.lambda_ref;
}

bool FastGradientSolver::converged(const FastState& state) const {
  return optim(state) <= config_.eps_g;
}

bool FastGradientSolver::in_region(const FastState& state) const {
  return state.lambda <= config_.entry_factor * state.c_hat;
}

RunResult FastGradientSolver::solve(const VectorRef& y0) const { return run(initialize(y0)); }

RunResult FastGradientSolver::solve(const SmoothedDualEval& start) const {
  return run(initialize(start));
}

RunResult FastGradientSolver::run(FastState state) const {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  RunResult result;
  result.solver = "fast";
  result.c_hat = state.c_hat;
  bool done = converged(state);
  while (!done && state.k < config_.max_iter) {
    TraceRow row = iterate(state);
    ++result.oracle_calls;
    if (config_.record_merit) {
      row.merit = evaluate(problem_, state.y, t_, config_.oracle).g_value;
      ++result.oracle_calls;
    }
    if (row.outside_region) ++result.region_violations;
    row.ms = elapsed_ms();
    result.rows.push_back(row);
    done = converged(state);
  }

  result.status = done ? RunStatus::converged : RunStatus::failed;
  result.iterations = state.k;
  result.final_lambda = state.lambda;
  result.final_optim = optim(state);
  result.final_t = t_;
  result.y = state.v;
  result.x = state.eval.x_star;
  result.residual = state.lambda;
  result.wall_ms = elapsed_ms();
  return result;
}

RunResult switching_solve(const SeparableProblem& problem, const SwitchConfig& config) {
  return switching_solve(problem, config, compute_constants(problem, config.pfgd.norm_tol));
}

RunResult switching_solve(const SeparableProblem& problem, const SwitchConfig& config,
                          const GeometryConstants& constants) {
  const auto start = std::chrono::steady_clock::now();
  PfgdConfig pc = config.pfgd;
  pc.max_iter = config.max_iter;
  pc.record_merit = config.record_merit;
  const PathFollowingSolver phase1(problem, pc, constants);

  double c_hat = 0.0;
  auto entered = [&](const PfgdState& s) {
    if (s.k == 0 && c_hat == 0.0)
      c_hat = std::max(c_bound(constants, config.tight_bound), s.lambda / config.entry_factor);
    return (s.t <= pc.eps_t && s.lambda <= config.entry_factor * c_hat) || phase1.converged(s);
  };
  PfgdState state;
  RunResult p1 = phase1.run(entered, &state);

  RunResult result = std::move(p1);
  result.solver = "switch";
  for (TraceRow& row : result.rows) row.phase = 1;
  if (result.status == RunStatus::failed) return result;

  FastConfig fc;
  fc.eps_g = pc.eps_g;
  fc.max_iter = config.max_iter - result.iterations;
  fc.normalized_optim = pc.normalized_optim;
  fc.lambda_ref = state.lambda_ref;
  fc.c_hat = std::max(c_hat, state.lambda / config.entry_factor);
  fc.entry_factor = config.entry_factor;
  fc.record_merit = config.record_merit;
  fc.norm_tol = pc.norm_tol;
  fc.oracle = pc.oracle;
  const FastGradientSolver phase2(problem, state.t, fc, constants);
  RunResult p2 = phase2.solve(state.eval);

  const double offset_ms = result.wall_ms;
  result.switch_row = static_cast<int>(result.rows.size());
  for (TraceRow row : p2.rows) {
    row.phase = 2;
    row.k += result.iterations;
    row.ms += offset_ms;
    result.rows.push_back(row);
  }
  result.status = p2.status;
  result.iterations += p2.iterations;
  result.oracle_calls += p2.oracle_calls;
  result.final_lambda = p2.final_lambda;
  result.final_optim = p2.final_optim;
  result.final_t = p2.final_t;
  result.y = std::move(p2.y);
  result.x = std::move(p2.x);
  result.residual = p2.residual;
  result.c_hat = p2.c_hat;
  result.region_violations = p2.region_violations;
  result.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace sepdec
