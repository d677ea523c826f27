#pragma once

#include "sepdec/baseline.hpp"
#include "sepdec/fast.hpp"
#include "sepdec/profile.hpp"

#include <string>
#include <vector>

namespace sepdec {

/// Solver names accepted by run_solver.
const std::vector<std::string>& solver_names();

/// Settings shared by every solver; each one reads what applies to it.
struct SolverSettings {
  PfgdConfig pfgd;
  /// pfgd: > 0 runs at this fixed t. fast: the fixed t (<= 0 means eps_t).
  double t_fixed = 0.0;
  double subgrad_step = 1.0;
};

/// Runs "pfgd", "fast", "switch" or "subgrad". Throws std::invalid_argument
/// for other names.
RunResult run_solver(const SeparableProblem& problem, const std::string& solver,
                     const SolverSettings& settings);

TraceSchema trace_schema(const std::string& solver);

enum class Metric { iterations, time };

struct BenchProblem {
  std::string id;
  const SeparableProblem* problem = nullptr;
};

/// Every (problem, solver) pair, problems in parallel over `jobs` threads.
/// Records come back in problem-major, solver-minor order. A run that throws
/// is recorded as failed.
std::vector<MetricRecord> run_bench(const std::vector<BenchProblem>& problems,
                                    const std::vector<std::string>& solvers,
                                    const SolverSettings& settings, Metric metric, int jobs = 1);

}  // namespace sepdec
