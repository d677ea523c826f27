#pragma once

#include "sepdec/trace.hpp"

#include <string>
#include <vector>

namespace sepdec {

/// One (problem, solver) outcome. Failed runs carry metric = +inf.
struct MetricRecord {
  std::string problem_id;
  std::string solver;
  double metric = 0.0;
  RunStatus status = RunStatus::failed;
};

/// Columns problem_id,solver,metric,status.
CsvTable metric_table(const std::vector<MetricRecord>& records);
/// Throws std::runtime_error on missing columns or unknown status values.
std::vector<MetricRecord> metric_records(const CsvTable& table);

/// Performance profile over a problems x solvers metric matrix.
struct ProfileData {
  std::vector<std::string> solvers;
  std::vector<std::string> problems;  // problems kept in the profile
  Matrix metrics;                     // T[p, s], +inf for failures
  Matrix ratios;                      // r[p, s] = T[p, s] / min_s T[p, s]
  std::vector<std::string> dropped;   // problems no solver solved
  std::vector<std::string> warnings;

  /// rho_s(tau) = |{p : log2 r[p, s] <= log2_tau}| / n_p.
  double rho(int solver, double log2_tau) const;
  /// Sorted distinct finite log2 ratios; always starts with 0 when any problem is kept.
  std::vector<double> breakpoints() const;
  /// Columns tau_log2, rho_<solver>...: one row per breakpoint, then tau_log2 = inf.
  CsvTable table() const;
};

/// Ratios and profile from a metric matrix. Rows where every solver failed are
/// dropped with a warning. Throws std::invalid_argument on negative, NaN or
/// mis-shaped input.
ProfileData build_profile(const std::vector<std::string>& problems,
                          const std::vector<std::string>& solvers, const Matrix& metrics);
/// Same from records; problem and solver order follow first appearance. Throws
/// std::invalid_argument if a pair is missing or repeated.
ProfileData build_profile(const std::vector<MetricRecord>& records);

}  // namespace sepdec
