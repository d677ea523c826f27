#pragma once

#include "sepdec/pfgd.hpp"

namespace sepdec {

/// theta_+ = theta (sqrt(theta^2 + 4) - theta) / 2, so that
/// (1 - theta_+) / theta_+^2 = 1 / theta^2. Requires theta in (0, 1].
double update_theta(double theta);

struct FastConfig {
  double eps_g = 1e-3;
  int max_iter = 10000;
  /// optim = lambda / max(1, lambda_ref); raw lambda when false.
  bool normalized_optim = true;
  /// Normalization reference; <= 0 means use lambda at y0.
  double lambda_ref = 0.0;
  /// c_bar in c_hat = max{c_bar, 4/3 lambda_0} is GeometryConstants::uniform_bound()
  /// when true (||A||*_{x_c} for box products), kappa ||A||*_{x_c} otherwise.
  bool tight_bound = true;
  /// Explicit c_hat; > 0 overrides the rule above. Throws if lambda_0 > 3/4 c_hat.
  double c_hat = 0.0;
  double entry_factor = 0.75;
  /// Spend one extra oracle call per iteration to record g(y^{k+1}; t).
  bool record_merit = false;
  double norm_tol = 1e-8;
  OracleOptions oracle;
};

struct FastState {
  int k = 0;
  Vector y;
  Vector v;
  Vector r;
  double theta = 1.0;
  double t = 0.0;
  double lambda = 0.0;  // ||grad g(v^k; t)||
  double c_hat = 0.0;
  double alpha = 0.0;
  double rho = 0.0;
  double lambda_ref = 1.0;
  SmoothedDualEval eval;  // at v^k
};

/// Thrown when the entry condition ||grad g(y0; t)|| <= 3/4 c_hat fails for an
/// explicitly supplied c_hat.
class EntryConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fast gradient decomposition at a fixed barrier parameter t.
class FastGradientSolver {
 public:
  FastGradientSolver(const SeparableProblem& problem, double t, FastConfig config,
                     GeometryConstants constants);
  FastGradientSolver(const SeparableProblem& problem, double t, FastConfig config);

  const GeometryConstants& constants() const { return constants_; }
  const FastConfig& config() const { return config_; }
  double t() const { return t_; }

  /// Oracle call at y0 unless `eval` is supplied (it must be at (y0, t)).
  FastState initialize(const VectorRef& y0) const;
  FastState initialize(const SmoothedDualEval& eval) const;

  /// One step from state k to k+1, ending with the oracle call at v^{k+1}.
  TraceRow iterate(FastState& state) const;

  double optim(const FastState& state) const;
  bool converged(const FastState& state) const;
  bool in_region(const FastState& state) const;

  RunResult solve(const VectorRef& y0) const;
  RunResult solve(const SmoothedDualEval& start) const;

 private:
  RunResult run(FastState state) const;

  const SeparableProblem& problem_;
  double t_;
  FastConfig config_;
  GeometryConstants constants_;
};

struct SwitchConfig {
  PfgdConfig pfgd;
  double entry_factor = 0.75;
  /// Total outer-iteration budget over both phases.
  int max_iter = 10000;
  bool tight_bound = true;
  bool record_merit = false;
};

/// Path-following until t <= eps_t and ||grad g|| <= entry_factor * c_hat, then
/// fast gradient at the reached t from the same point with the same c_hat, where
/// c_hat = max{c_bar, lambda_0 / entry_factor}, lambda_0 = ||grad g(y0; t0)|| and
/// c_bar = GeometryConstants::uniform_bound() (or kappa ||A||*_{x_c} when
/// tight_bound is false). Rows carry phase 1 or 2.
RunResult switching_solve(const SeparableProblem& problem, const SwitchConfig& config);
RunResult switching_solve(const SeparableProblem& problem, const SwitchConfig& config,
                          const GeometryConstants& constants);

}  // namespace sepdec
