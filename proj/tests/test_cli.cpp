#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli_commands.hpp"
#include "sepdec/problem_io.hpp"
#include "sepdec/profile.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace sepdec;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CsvTable read_csv(const fs::path& p) {
  std::ifstream in(p);
  return CsvTable::read(in);
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sepdec_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gen writes a problem and its ground truth deterministically") {
  const fs::path dir = scratch("gen");
  const std::vector<std::string> args = {"gen", "--family", "basis_pursuit", "--m", "50", "--n",
                                         "128", "--k", "14", "--seed", "7", "--out"};
  auto with_out = [&](const fs::path& p) {
    std::vector<std::string> a = args;
    a.push_back(p.string());
    return a;
  };
  REQUIRE(run(with_out(dir / "a.json")).code == 0);
  REQUIRE(run(with_out(dir / "b.json")).code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  const nlohmann::json truth = read_json(dir / "a.x0.json");
  CHECK(truth["x0"].size() == 128);
  CHECK(truth["seed"] == 7);
  const ProblemData d = load_problem_data(dir / "a.json");
  CHECK(validate(d).ok());

  const Outcome exp = run({"gen", "--family", "exp_l1", "--m", "200", "--n", "1000", "--seed",
                           "1", "--out", (dir / "exp.json").string()});
  CHECK(exp.code == 0);
  CHECK(validate(build_problem(load_problem_data(dir / "exp.json"))).ok());
}

TEST_CASE("solve reports status through the exit code") {
  const fs::path dir = scratch("solve");
  REQUIRE(run({"gen", "--family", "toy", "--seed", "3", "--out", (dir / "toy.json").string()}).code ==
          0);
  const Outcome ok = run({"solve", (dir / "toy.json").string(), "--solver", "switch", "--ca-mode",
                          "adaptive", "--min-sigma", "0.01", "--out", (dir / "ok").string()});
  CHECK(ok.code == 0);
  const nlohmann::json summary = read_json(dir / "ok" / "summary.json");
  CHECK(summary["status"] == "converged");
  CHECK(summary["optim"].get<double>() <= 1e-3);
  CHECK(summary["t"].get<double>() <= 1e-2);
  for (const char* key : {"iterations", "residual", "wall_ms", "workers"}) CHECK(summary.contains(key));
  const CsvTable trace = read_csv(dir / "ok" / "trace.csv");
  CHECK(trace.header() == trace_columns(TraceSchema::fast));
  CHECK(trace.size() == summary["iterations"].get<std::size_t>());

  const Outcome failed = run({"solve", (dir / "toy.json").string(), "--max-iter", "1", "--out",
                              (dir / "failed").string()});
  CHECK(failed.code == 1);
  CHECK(read_json(dir / "failed" / "summary.json")["status"] == "failed");

  // The default path-following rule stalls in t on this instance.
  CHECK(run({"solve", (dir / "toy.json").string(), "--max-iter", "2000", "--out",
             (dir / "plain").string()})
            .code == 1);
}

TEST_CASE("invalid input exits with code 2") {
  const fs::path dir = scratch("invalid");
  CHECK(run({"gen", "--family", "lasso"}).code == 2);
  CHECK(run({"solve", (dir / "missing.json").string()}).code == 2);
  CHECK(run({"solve", "x.json", "--ca-mode", "sometimes"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
  {
    std::ofstream bad(dir / "bad.json");
    bad << R"({"m": 1, "components": [{"n": 1, "a": [1], "b": [0], "lower": [2], "upper": [1]}]})";
  }
  const Outcome bad = run({"solve", (dir / "bad.json").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("invalid input") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("worker count does not change the trace") {
  const fs::path dir = scratch("workers");
  REQUIRE(run({"gen", "--family", "exp_l1", "--m", "30", "--n", "300", "--seed", "4", "--out",
               (dir / "p.json").string()})
              .code == 0);
  for (const char* w : {"1", "8"})
    run({"solve", (dir / "p.json").string(), "--max-iter", "40", "--workers", w, "--out",
         (dir / (std::string("w") + w)).string()});
  const CsvTable one = read_csv(dir / "w1" / "trace.csv"), eight = read_csv(dir / "w8" / "trace.csv");
  REQUIRE(one.size() == 40);
  CHECK(one.column("g") == eight.column("g"));
  CHECK(one.column("lambda") == eight.column("lambda"));
  CHECK(read_json(dir / "w8" / "summary.json")["workers"] == 8);
}

TEST_CASE("bench over five toys and three solvers") {
  const fs::path dir = scratch("bench");
  for (int s = 1; s <= 5; ++s)
    REQUIRE(run({"gen", "--family", "toy", "--seed", std::to_string(s), "--out",
                 (dir / "problems" / ("toy" + std::to_string(s) + ".json")).string()})
                .code == 0);
  const Outcome b = run({"bench", (dir / "problems").string(), "--solvers", "pfgd,switch,subgrad",
                         "--max-iter", "300", "--out", (dir / "out").string()});
  CHECK(b.code == 0);
  const CsvTable metrics = read_csv(dir / "out" / "metrics.csv");
  CHECK(metrics.size() == 15);
  const std::vector<MetricRecord> records = metric_records(metrics);
  CHECK(records[0].problem_id == "toy1");
  const CsvTable profile = read_csv(dir / "out" / "profile.csv");
  CHECK(profile.header().size() == 4);
  CHECK(run({"bench", (dir / "problems").string(), "--solvers", "pfgd"}).code == 2);
}

TEST_CASE("profile of a metric table with failures") {
  const fs::path dir = scratch("profile");
  {
    std::ofstream m(dir / "metrics.csv");
    m << "problem_id,solver,metric,status\n";
    for (int p = 1; p <= 5; ++p) {
      m << "p" << p << ",a," << 10 * p << ",converged\n";
      if (p <= 2)
        m << "p" << p << ",b,inf,failed\n";
      else
        m << "p" << p << ",b," << 5 * p << ",converged\n";
    }
  }
  const Outcome o = run({"profile", (dir / "metrics.csv").string(), "--out",
                         (dir / "profile.csv").string()});
  REQUIRE(o.code == 0);
  const CsvTable table = read_csv(dir / "profile.csv");
  const std::vector<double> tau = table.numbers("tau_log2"), rho_b = table.numbers("rho_b"),
                            rho_a = table.numbers("rho_a");
  CHECK(std::isinf(tau.back()));
  CHECK(rho_b.back() == doctest::Approx(0.6));
  CHECK(rho_a.back() == 1.0);
  CHECK(run({"profile", (dir / "nope.csv").string()}).code == 2);
}
