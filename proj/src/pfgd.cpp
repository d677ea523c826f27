#include "sepdec/pfgd.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

namespace sepdec {

TUpdate update_t(double t, double omega_k, double c_f, double c_f_cap) {
  if (c_f > c_f_cap) return {t, 0.0, true};
  const double sigma = omega_k > 0.0 ? omega_k / (2.0 * (omega_k + c_f)) : 0.0;
  return {t * (1.0 - sigma), sigma, false};
}

double step_size(double t, double c_a, double lambda) {
  return t / (c_a * (c_a + lambda));
}

PathFollowingSolver::PathFollowingSolver(const SeparableProblem& problem, PfgdConfig config,
                                         GeometryConstants constants)
    : problem_(problem), config_(std::move(config)), constants_(std::move(constants)) {
  if (!(config_.t0 > 0.0)) throw std::invalid_argument("pfgd: t0 must be positive");
  if (!(config_.eps_t > 0.0) || !(config_.eps_g > 0.0))
    throw std::invalid_argument("pfgd: tolerances must be positive");
  if (config_.y0.size() != 0 && config_.y0.size() != problem.m())
    throw std::invalid_argument("pfgd: y0 has wrong length");
}

PathFollowingSolver::PathFollowingSolver(const SeparableProblem& problem, PfgdConfig config)
    : PathFollowingSolver(problem, config, compute_constants(problem, config.norm_tol)) {}

double PathFollowingSolver::local_constant(PfgdState& state) const {
  if (config_.ca_mode == CaMode::fixed) return constants_.c_bar_a;
  PowerIterationOptions options;
  options.tol = config_.norm_tol;
  options.start = state.power_start;
  NormEstimate est = local_matrix_norm(problem_, state.eval.x_star, options);
  state.power_start = std::move(est.eigenvector);
  return est.value;
}

PfgdState PathFollowingSolver::initialize() const {
  PfgdState state;
  state.y = config_.y0.size() ? config_.y0 : Vector::Zero(problem_.m());
  state.t = config_.t0;
  state.eval = evaluate(problem_, state.y, state.t, config_.oracle);
  state.lambda = state.eval.lambda;
  state.c_a = local_constant(state);
  state.omega = omega(state.lambda / state.c_a);
  state.c_f = state.eval.barrier_value;
  state.lambda_ref = config_.normalized_optim ? std::max(1.0, state.lambda) : 1.0;
  return state;
}

TraceRow PathFollowingSolver::refresh(PfgdState& state) const {
  // Step 1: barrier parameter.
  TUpdate up{state.t, 0.0, false};
  if (!config_.fixed_t) up = update_t(state.t, state.omega, state.c_f, config_.c_f_cap);
  if (!config_.fixed_t && !up.frozen && up.sigma < config_.min_sigma)
    up = {state.t * (1.0 - config_.min_sigma), config_.min_sigma, false};
  // The clamp at the smallest normal double only guards against underflow to 0.
  state.t = std::max({up.t, config_.t_floor, std::numeric_limits<double>::min()});
  state.sigma = up.sigma;

  // Step 2: parallel primal solve at (y^k, t_{k+1}).
  state.eval = evaluate(problem_, state.y, state.t, config_.oracle);

  // Step 3.
  state.lambda = state.eval.lambda;
  state.c_a = local_constant(state);
  state.omega = omega(state.lambda / state.c_a);
  state.c_f = state.eval.barrier_value;

  TraceRow row;
  row.k = state.k;
  row.t = state.t;
  row.lambda = state.lambda;
  row.g = state.eval.g_value;
  row.sigma = state.sigma;
  row.c_f = state.c_f;
  row.c_a = state.c_a;
  row.optim = optim(state);
  return row;
}

void PathFollowingSolver::take_step(PfgdState& state, TraceRow& row) const {
  // Steps 5-6.
  state.alpha = step_size(state.t, state.c_a, state.lambda);
  state.y -= state.alpha * state.eval.gradient;
  ++state.k;
  row.alpha = state.alpha;
}

TraceRow PathFollowingSolver::iterate(PfgdState& state) const {
  TraceRow row = refresh(state);
  take_step(state, row);
  return row;
}

double PathFollowingSolver::optim(const PfgdState& state) const {
  return state.lambda / state.lambda_ref;
}

bool PathFollowingSolver::converged(const PfgdState& state) const {
  return state.t <= config_.eps_t && optim(state) <= config_.eps_g;
}

RunResult PathFollowingSolver::solve() const {
  return run([this](const PfgdState& s) { return converged(s); });
}

RunResult PathFollowingSolver::run(const std::function<bool(const PfgdState&)>& stop,
                                   PfgdState* final_state) const {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  RunResult result;
  result.solver = "pfgd";
  PfgdState state = initialize();
  result.oracle_calls = 1;

  bool done = stop(state);
  for (int pass = 0; !done && pass < config_.max_iter; ++pass) {
    TraceRow row = refresh(state);
    ++result.oracle_calls;
    result.iterations = pass + 1;
    done = stop(state);
    if (!done) {
      take_step(state, row);
      if (config_.record_merit) {
        row.merit = evaluate(problem_, state.y, state.t, config_.oracle).g_value;
        ++result.oracle_calls;
      }
    }
    row.ms = elapsed_ms();
    result.rows.push_back(row);
  }

  result.status = done ? RunStatus::converged : RunStatus::failed;
  result.final_lambda = state.lambda;
  result.final_optim = optim(state);
  result.final_t = state.t;
  result.y = state.eval.y;
  result.x = state.eval.x_star;
  result.residual = state.eval.lambda;
  result.wall_ms = elapsed_ms();
  if (final_state) *final_state = std::move(state);
  return result;
}

}  // namespace sepdec
