#include "cli_commands.hpp"

#include "sepdec/bench.hpp"
#include "sepdec/generators.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

namespace sepdec::cli {
namespace fs = std::filesystem;

namespace {

struct SolverFlags {
  std::string solver = "pfgd";
  double t0 = 1.0;
  double eps_t = 1e-2;
  double eps_g = 1e-3;
  int max_iter = 10000;
  double cf_cap = 1e6;
  std::string ca_mode = "fixed";
  double min_sigma = 0.0;
  double t_fixed = 0.0;
  int workers = 0;

  SolverSettings settings() const {
    SolverSettings s;
    s.pfgd.t0 = t0;
    s.pfgd.eps_t = eps_t;
    s.pfgd.eps_g = eps_g;
    s.pfgd.max_iter = max_iter;
    s.pfgd.c_f_cap = cf_cap;
    s.pfgd.ca_mode = ca_mode == "adaptive" ? CaMode::adaptive : CaMode::fixed;
    s.pfgd.min_sigma = min_sigma;
    s.pfgd.oracle.workers = workers;
    s.t_fixed = t_fixed;
    return s;
  }
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--t0", f.t0, "initial barrier parameter")->check(CLI::PositiveNumber);
  app->add_option("--eps-t", f.eps_t, "terminal barrier parameter")->check(CLI::PositiveNumber);
  app->add_option("--eps-g", f.eps_g, "tolerance on optim")->check(CLI::PositiveNumber);
  app->add_option("--max-iter", f.max_iter, "outer iteration budget")->check(CLI::NonNegativeNumber);
  app->add_option("--cf-cap", f.cf_cap, "barrier value above which t is frozen")
      ->check(CLI::PositiveNumber);
  app->add_option("--ca-mode", f.ca_mode, "local norm constant")
      ->check(CLI::IsMember({"fixed", "adaptive"}));
  app->add_option("--min-sigma", f.min_sigma, "smallest relative decrease of t per pass")
      ->check(CLI::Range(0.0, 0.5));
  app->add_option("--t-fixed", f.t_fixed, "fixed barrier parameter (pfgd, fast)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--workers", f.workers, "threads for the subproblem fan-out")
      ->envname("SEPDEC_WORKERS")
      ->check(CLI::PositiveNumber);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json to_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

fs::path sidecar_path(const fs::path& problem) {
  fs::path p = problem;
  return p.replace_extension(".x0.json");
}

struct GenFlags {
  std::string family;
  GeneratorSpec spec;
  fs::path out = "problem.json";
};

int cmd_gen(const GenFlags& f, std::ostream& out) {
  GeneratorSpec spec = f.spec;
  spec.family = parse_family(f.family);
  const GeneratedProblem gp = generate(spec);
  const SeparableProblem problem = build_problem(gp.data);
  const ValidationReport report = validate(problem);
  if (!report.ok()) throw InvalidProblem(report.to_string());

  if (f.out.has_parent_path()) fs::create_directories(f.out.parent_path());
  save_problem_data(gp.data, f.out);
  write_json(sidecar_path(f.out),
             {{"family", to_string(spec.family)}, {"seed", spec.seed}, {"x0", to_json(gp.x0)}});
  out << "wrote " << f.out.string() << " (m=" << problem.m() << ", n=" << problem.n() << ")\n";
  if (!report.empty()) out << report.to_string();
  return kSuccess;
}

struct SolveFlags {
  fs::path problem;
  SolverFlags solver;
  fs::path out = ".";
};

int cmd_solve(const SolveFlags& f, std::ostream& out) {
  const SeparableProblem problem = build_problem(load_problem_data(f.problem));
  SolverSettings settings = f.solver.settings();
  settings.pfgd.oracle.workers = resolve_workers(f.solver.workers);

  const RunResult r = run_solver(problem, f.solver.solver, settings);

  fs::create_directories(f.out);
  {
    std::ofstream trace(f.out / "trace.csv");
    if (!trace) throw std::runtime_error("cannot write " + (f.out / "trace.csv").string());
    write_trace_csv(trace, r.rows, trace_schema(f.solver.solver));
  }
  const double residual = (problem.a() * r.x - problem.b()).norm();
  nlohmann::json summary = {{"problem", f.problem.string()},
                            {"solver", r.solver},
                            {"status", to_string(r.status)},
                            {"iterations", r.iterations},
                            {"oracle_calls", r.oracle_calls},
                            {"optim", r.final_optim},
                            {"t", r.final_t},
                            {"lambda", r.final_lambda},
                            {"residual", residual},
                            {"wall_ms", r.wall_ms},
                            {"workers", settings.pfgd.oracle.workers},
                            {"ca_mode", f.solver.ca_mode},
                            {"min_sigma", f.solver.min_sigma}};
  if (r.c_hat > 0.0) summary["c_hat"] = r.c_hat;
  if (r.switch_row >= 0) summary["switch_row"] = r.switch_row;
  if (f.solver.solver == "fast" || f.solver.solver == "switch")
    summary["region_violations"] = r.region_violations;
  write_json(f.out / "summary.json", summary);
  write_json(f.out / "solution.json", {{"x", to_json(r.x)}, {"y", to_json(r.y)}});

  out << r.solver << ": " << to_string(r.status) << " after " << r.iterations
      << " iterations, optim " << r.final_optim << ", t " << r.final_t << '\n';
  return r.status == RunStatus::converged ? kSuccess : kSolverFailure;
}

std::vector<fs::path> expand_problems(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && entry.path().extension() == ".json" &&
            name.find(".x0.json") == std::string::npos)
          found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw InvalidProblem("no such problem file or directory: " + in);
    }
  }
  if (files.empty()) throw InvalidProblem("no problem files given");
  return files;
}

void write_profile(const ProfileData& profile, const fs::path& path, std::ostream& out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  profile.table().write(file);
  for (const std::string& w : profile.warnings) out << "warning: " << w << '\n';
}

struct BenchFlags {
  std::vector<std::string> problems;
  std::vector<std::string> solvers{"switch", "subgrad"};
  std::string metric = "iterations";
  int jobs = 1;
  SolverFlags solver;
  fs::path out = "bench";
};

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  if (f.solvers.size() < 2) throw InvalidProblem("bench needs at least two solvers");
  const std::vector<fs::path> files = expand_problems(f.problems);
  std::vector<SeparableProblem> problems;
  problems.reserve(files.size());
  std::vector<BenchProblem> entries;
  for (const fs::path& file : files) problems.push_back(build_problem(load_problem_data(file)));
  for (std::size_t i = 0; i < files.size(); ++i)
    entries.push_back({files[i].stem().string(), &problems[i]});

  SolverSettings settings = f.solver.settings();
  // Problems run in parallel; each run keeps a single oracle worker.
  settings.pfgd.oracle.workers = f.jobs > 1 ? 1 : resolve_workers(f.solver.workers);
  const Metric metric = f.metric == "time" ? Metric::time : Metric::iterations;
  const auto records = run_bench(entries, f.solvers, settings, metric, f.jobs);

  fs::create_directories(f.out);
  {
    std::ofstream file(f.out / "metrics.csv");
    if (!file) throw std::runtime_error("cannot write " + (f.out / "metrics.csv").string());
    metric_table(records).write(file);
  }
  write_profile(build_profile(records), f.out / "profile.csv", out);
  int failures = 0;
  for (const MetricRecord& r : records) failures += r.status == RunStatus::failed;
  out << records.size() << " runs, " << failures << " failed";
  if (metric == Metric::time) out << " (time metric: machine dependent)";
  out << '\n';
  return kSuccess;
}

struct ProfileFlags {
  fs::path metrics;
  fs::path out = "profile.csv";
};

int cmd_profile(const ProfileFlags& f, std::ostream& out) {
  std::ifstream in(f.metrics);
  if (!in) throw InvalidProblem("cannot read " + f.metrics.string());
  const ProfileData profile = build_profile(metric_records(CsvTable::read(in)));
  write_profile(profile, f.out, out);
  out << "profile over " << profile.problems.size() << " problems, " << profile.solvers.size()
      << " solvers\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual decomposition solvers for separable convex programs", "sepdec"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults");

  GenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a problem file");
  gen_cmd->add_option("--family", gen.family, "basis_pursuit | exp_l1 | toy")
      ->required()
      ->check(CLI::IsMember({"basis_pursuit", "exp_l1", "toy"}));
  gen_cmd->add_option("--m", gen.spec.m, "coupling rows")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n", gen.spec.n, "variables")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--k", gen.spec.k, "nonzeros of x0 (basis_pursuit)")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--density", gen.spec.density, "nonzero fraction of x0 (exp_l1)");
  gen_cmd->add_option("--seed", gen.spec.seed, "generator seed");
  gen_cmd->add_option("--gamma", gen.spec.l1_weight, "l1 weight")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--out", gen.out, "problem file; x0 goes next to it as *.x0.json");

  SolveFlags solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run one solver on one problem");
  solve_cmd->add_option("problem", solve.problem, "problem file")->required();
  solve_cmd->add_option("--solver", solve.solver.solver)
      ->check(CLI::IsMember(solver_names()));
  add_solver_flags(solve_cmd, solve.solver);
  solve_cmd->add_option("--out", solve.out, "output directory");

  BenchFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "run solvers over problems and profile them");
  bench_cmd->add_option("problems", bench.problems, "problem files or directories")->required();
  bench_cmd->add_option("--solvers", bench.solvers)
      ->delimiter(',')
      ->check(CLI::IsMember(solver_names()));
  bench_cmd->add_option("--metric", bench.metric)->check(CLI::IsMember({"iterations", "time"}));
  bench_cmd->add_option("--jobs", bench.jobs, "problems run in parallel")
      ->check(CLI::PositiveNumber);
  add_solver_flags(bench_cmd, bench.solver);
  bench_cmd->add_option("--out", bench.out, "output directory");

  ProfileFlags profile;
  CLI::App* profile_cmd = app.add_subcommand("profile", "profile a metric table");
  profile_cmd->add_option("metrics", profile.metrics, "metrics CSV")->required();
  profile_cmd->add_option("--out", profile.out, "profile CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (solve_cmd->parsed()) return cmd_solve(solve, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
    return cmd_profile(profile, out);
  } catch (const InvalidProblem& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace sepdec::cli
