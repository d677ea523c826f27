#include "sepdec/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace sepdec {

CsvTable metric_table(const std::vector<MetricRecord>& records) {
  CsvTable table({"problem_id", "solver", "metric", "status"});
  for (const MetricRecord& r : records)
    table.add_row({r.problem_id, r.solver, format_double(r.metric), to_string(r.status)});
  return table;
}

std::vector<MetricRecord> metric_records(const CsvTable& table) {
  const auto ids = table.column("problem_id");
  const auto solvers = table.column("solver");
  const auto metrics = table.numbers("metric");
  const auto status = table.column("status");
  std::vector<MetricRecord> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    MetricRecord r{ids[i], solvers[i], metrics[i], RunStatus::failed};
    if (status[i] == "converged")
      r.status = RunStatus::converged;
    else if (status[i] != "failed")
      throw std::runtime_error("metric table: unknown status \"" + status[i] + "\"");
    out.push_back(std::move(r));
  }
  return out;
}

double ProfileData::rho(int solver, double log2_tau) const {
  if (problems.empty()) return 0.0;
  int count = 0;
  for (Eigen::Index p = 0; p < ratios.rows(); ++p) {
    const double r = ratios(p, solver);
    if (std::isfinite(r) && std::log2(r) <= log2_tau) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(problems.size());
}

std::vector<double> ProfileData::breakpoints() const {
  std::vector<double> out;
  for (Eigen::Index p = 0; p < ratios.rows(); ++p)
    for (Eigen::Index s = 0; s < ratios.cols(); ++s)
      if (std::isfinite(ratios(p, s))) out.push_back(std::log2(ratios(p, s)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CsvTable ProfileData::table() const {
  std::vector<std::string> header{"tau_log2"};
  for (const std::string& s : solvers) header.push_back("rho_" + s);
  CsvTable table(header);
  auto add = [&](double tau) {
    std::vector<std::string> row{format_double(tau)};
    for (std::size_t s = 0; s < solvers.size(); ++s)
      row.push_back(format_double(rho(static_cast<int>(s), tau)));
    table.add_row(std::move(row));
  };
  for (double tau : breakpoints()) add(tau);
  add(std::numeric_limits<double>::infinity());
  return table;
}

ProfileData build_profile(const std::vector<std::string>& problems,
                          const std::vector<std::string>& solvers, const Matrix& metrics) {
  if (metrics.rows() != static_cast<Eigen::Index>(problems.size()) ||
      metrics.cols() != static_cast<Eigen::Index>(solvers.size()))
    throw std::invalid_argument("build_profile: metric matrix shape mismatch");
  if (solvers.empty()) throw std::invalid_argument("build_profile: no solvers");
  for (Eigen::Index i = 0; i < metrics.size(); ++i) {
    const double v = metrics.data()[i];
    if (std::isnan(v) || v < 0.0)
      throw std::invalid_argument("build_profile: metrics must be >= 0 or +inf");
  }

  ProfileData out;
  out.solvers = solvers;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index p = 0; p < metrics.rows(); ++p) {
    if (std::isfinite(metrics.row(p).minCoeff())) {
      kept.push_back(p);
      out.problems.push_back(problems[static_cast<std::size_t>(p)]);
    } else {
      out.dropped.push_back(problems[static_cast<std::size_t>(p)]);
      out.warnings.push_back("problem " + problems[static_cast<std::size_t>(p)] +
                             " unsolved by every solver; dropped");
    }
  }
  const auto np = static_cast<Eigen::Index>(kept.size());
  out.metrics.resize(np, metrics.cols());
  out.ratios.resize(np, metrics.cols());
  for (Eigen::Index i = 0; i < np; ++i) {
    out.metrics.row(i) = metrics.row(kept[static_cast<std::size_t>(i)]);
    const double best = out.metrics.row(i).minCoeff();
    for (Eigen::Index s = 0; s < metrics.cols(); ++s) {
      const double v = out.metrics(i, s);
      // A zero metric (solved at initialization) ties with any other zero.
      out.ratios(i, s) = best == 0.0 ? (v == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                                     : v / best;
    }
  }
  return out;
}

ProfileData build_profile(const std::vector<MetricRecord>& records) {
  std::vector<std::string> problems, solvers;
  std::map<std::string, std::size_t> pi, si;
  for (const MetricRecord& r : records) {
    if (pi.emplace(r.problem_id, problems.size()).second) problems.push_back(r.problem_id);
    if (si.emplace(r.solver, solvers.size()).second) solvers.push_back(r.solver);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Matrix metrics = Matrix::Constant(static_cast<Eigen::Index>(problems.size()),
                                    static_cast<Eigen::Index>(solvers.size()), nan);
  for (const MetricRecord& r : records) {
    double& cell = metrics(static_cast<Eigen::Index>(pi[r.problem_id]),
                           static_cast<Eigen::Index>(si[r.solver]));
    if (!std::isnan(cell))
      throw std::invalid_argument("build_profile: repeated pair " + r.problem_id + "/" + r.solver);
    cell = r.status == RunStatus::converged ? r.metric : std::numeric_limits<double>::infinity();
  }
  if (metrics.hasNaN()) throw std::invalid_argument("build_profile: missing (problem, solver) pair");
  return build_profile(problems, solvers, metrics);
}

}  // namespace sepdec
