#pragma once

#include "sepdec/geometry.hpp"
#include "sepdec/primal_oracle.hpp"
#include "sepdec/trace.hpp"

#include <functional>

namespace sepdec {

/// How the local norm constant c_A enters the step size.
enum class CaMode {
  fixed,     // c_A = c_bar_A = kappa ||A||*_{x_c}, computed once
  adaptive,  // c_A = ||A||*_{x*(y; t)} recomputed every iteration
};

struct PfgdConfig {
  double t0 = 1.0;
  double eps_t = 1e-2;
  double eps_g = 1e-3;
  int max_iter = 10000;
  double c_f_cap = 1e6;  // t is frozen while F(x*) exceeds this
  CaMode ca_mode = CaMode::fixed;
  /// optim = lambda / max(1, lambda_0) when true, raw lambda otherwise.
  bool normalized_optim = true;
  /// Keep t at t0 for the whole run.
  bool fixed_t = false;
  /// Lower clamp on t; 0 disables.
  double t_floor = 0.0;
  /// Smallest relative decrease of t per pass outside the safeguard branch.
  /// 0 keeps the plain rule, under which t can stall once lambda is tiny.
  double min_sigma = 0.0;
  /// Spend one extra oracle call per iteration to record g(y^{k+1}; t_{k+1}).
  bool record_merit = false;
  double norm_tol = 1e-8;
  OracleOptions oracle;
  /// Initial multiplier; empty means zero.
  Vector y0;
};

/// Iterate of the path-following method between two outer iterations.
struct PfgdState {
  int k = 0;
  Vector y;               // y^k
  double t = 0.0;         // t_k
  SmoothedDualEval eval;  // most recent oracle call, at (y^{k-1}, t_k)
  double lambda = 0.0;    // ||grad g(y^{k-1}; t_k)||
  double c_a = 0.0;
  double omega = 0.0;     // omega(lambda / c_a)
  double c_f = 0.0;       // F(x*) of the most recent call
  double sigma = 0.0;
  double alpha = 0.0;
  double lambda_ref = 1.0;  // optim normalization
  Vector power_start;       // warm start for adaptive c_A
};

struct TUpdate {
  double t = 0.0;
  double sigma = 0.0;
  bool frozen = false;  // safeguard branch taken
};

/// t_+ = t (1 - sigma), sigma = omega / (2 (omega + c_F)), unless c_F > c_f_cap,
/// in which case t is kept.
TUpdate update_t(double t, double omega_k, double c_f, double c_f_cap);

/// alpha = t / (c_A (c_A + lambda)).
double step_size(double t, double c_a, double lambda);

/// Algorithm driver for the path-following gradient decomposition method.
class PathFollowingSolver {
 public:
  PathFollowingSolver(const SeparableProblem& problem, PfgdConfig config,
                      GeometryConstants constants);
  PathFollowingSolver(const SeparableProblem& problem, PfgdConfig config);

  const GeometryConstants& constants() const { return constants_; }
  const PfgdConfig& config() const { return config_; }

  /// Oracle call at (y0, t0) and the derived lambda_0, c_A^0, omega_0, c_F^0.
  PfgdState initialize() const;

  /// One full pass: t update, oracle call at (y^k, t_{k+1}), refresh of
  /// lambda/c_A/omega/c_F, step size and multiplier update. Returns the trace row.
  TraceRow iterate(PfgdState& state) const;

  /// First half of a pass: t update, oracle call and refresh. The termination
  /// test belongs between refresh() and take_step().
  TraceRow refresh(PfgdState& state) const;
  /// Second half: step size and y^{k+1} = y^k - alpha grad g(y^k; t_{k+1}).
  void take_step(PfgdState& state, TraceRow& row) const;

  double optim(const PfgdState& state) const;
  bool converged(const PfgdState& state) const;

  /// Runs until converged() or max_iter passes.
  RunResult solve() const;

  /// As solve(), but stops as soon as `stop(state)` holds after a refresh. The
  /// final state is written to `final_state` when non-null.
  RunResult run(const std::function<bool(const PfgdState&)>& stop,
                PfgdState* final_state = nullptr) const;

 private:
  double local_constant(PfgdState& state) const;

  const SeparableProblem& problem_;
  PfgdConfig config_;
  GeometryConstants constants_;
};

}  // namespace sepdec
