#include "sepdec/bench.hpp"

#include <limits>
#include <stdexcept>

namespace sepdec {

const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> names{"pfgd", "fast", "switch", "subgrad"};
  return names;
}

TraceSchema trace_schema(const std::string& solver) {
  return solver == "fast" || solver == "switch" ? TraceSchema::fast : TraceSchema::gradient;
}

RunResult run_solver(const SeparableProblem& problem, const std::string& solver,
                     const SolverSettings& settings) {
  const PfgdConfig& pc = settings.pfgd;
  if (solver == "pfgd") {
    PfgdConfig config = pc;
    if (settings.t_fixed > 0.0) {
      config.t0 = settings.t_fixed;
      config.fixed_t = true;
    }
    return PathFollowingSolver(problem, config).solve();
  }
  if (solver == "fast") {
    FastConfig fc;
    fc.eps_g = pc.eps_g;
    fc.max_iter = pc.max_iter;
    fc.normalized_optim = pc.normalized_optim;
    fc.norm_tol = pc.norm_tol;
    fc.oracle = pc.oracle;
    const double t = settings.t_fixed > 0.0 ? settings.t_fixed : pc.eps_t;
    const Vector y0 = pc.y0.size() ? pc.y0 : Vector::Zero(problem.m());
    return FastGradientSolver(problem, t, fc).solve(y0);
  }
  if (solver == "switch") {
    SwitchConfig sc;
    sc.pfgd = pc;
    sc.max_iter = pc.max_iter;
    sc.record_merit = pc.record_merit;
    return switching_solve(problem, sc);
  }
  if (solver == "subgrad") {
    SubgradientConfig sc;
    sc.step = settings.subgrad_step;
    sc.eps_g = pc.eps_g;
    sc.max_iter = pc.max_iter;
    sc.workers = pc.oracle.workers;
    return subgradient_baseline(problem, sc);
  }
  throw std::invalid_argument("unknown solver \"" + solver + "\"");
}

std::vector<MetricRecord> run_bench(const std::vector<BenchProblem>& problems,
                                    const std::vector<std::string>& solvers,
                                    const SolverSettings& settings, Metric metric, int jobs) {
  const int np = static_cast<int>(problems.size());
  const int ns = static_cast<int>(solvers.size());
  std::vector<MetricRecord> records(static_cast<std::size_t>(np * ns));
  for (const std::string& s : solvers) {
    bool known = false;
    for (const std::string& n : solver_names()) known = known || n == s;
    if (!known) throw std::invalid_argument("unknown solver \"" + s + "\"");
  }

#pragma omp parallel for num_threads(jobs > 0 ? jobs : 1) schedule(dynamic)
  for (int idx = 0; idx < np * ns; ++idx) {
    const BenchProblem& bp = problems[static_cast<std::size_t>(idx / ns)];
    MetricRecord& rec = records[static_cast<std::size_t>(idx)];
    rec.problem_id = bp.id;
    rec.solver = solvers[static_cast<std::size_t>(idx % ns)];
    try {
      const RunResult r = run_solver(*bp.problem, rec.solver, settings);
      rec.status = r.status;
      rec.metric = metric == Metric::iterations ? static_cast<double>(r.iterations) : r.wall_ms;
    } catch (const std::exception&) {
      rec.status = RunStatus::failed;
    }
    if (rec.status == RunStatus::failed) rec.metric = std::numeric_limits<double>::infinity();
  }
  return records;
}

}  // namespace sepdec
