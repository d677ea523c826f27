#pragma once

#include "sepdec/barrier.hpp"

#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace sepdec {

/// One outer iteration of any of the dual solvers.
struct TraceRow {
  int k = 0;
  int phase = 0;  // 0: single-phase run, 1/2: switching phases
  double t = 0.0;
  double lambda = 0.0;  // gradient norm at the evaluated point
  double g = 0.0;       // oracle value at the evaluated point
  double alpha = 0.0;
  double sigma = 0.0;
  double theta = 0.0;
  double rho = 0.0;
  double c_f = 0.0;
  double c_a = 0.0;
  double optim = 0.0;
  double ms = 0.0;  // wall time since the start of the run
  /// g(y^k; t_k) at the accepted iterate, when merit recording is enabled.
  double merit = std::numeric_limits<double>::quiet_NaN();
  /// Fast phase only: the iterate left the region ||grad|| <= 3/4 c_hat.
  bool outside_region = false;
};

enum class RunStatus { converged, failed };
const char* to_string(RunStatus status);

/// Trace and final state of a solver run.
struct RunResult {
  std::string solver;
  RunStatus status = RunStatus::failed;
  std::vector<TraceRow> rows;
  int iterations = 0;
  int oracle_calls = 0;
  double final_optim = 0.0;
  double final_lambda = 0.0;
  double final_t = 0.0;
  double residual = 0.0;  // ||A x - b||_2 at the returned primal point
  double wall_ms = 0.0;
  Vector y;
  Vector x;
  /// Fast phase: constant c_hat used in the step sizes, and the switch row.
  double c_hat = 0.0;
  int switch_row = -1;
  int region_violations = 0;
};

enum class TraceSchema {
  gradient,  // k,t,lambda,g,alpha,sigma,cF,ms
  fast,      // k,phase,t,lambda,g,alpha,theta,rho,ms
};

std::vector<std::string> trace_columns(TraceSchema schema);
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows,
                     TraceSchema schema);

/// Headered CSV held as strings. Every CSV the project writes reads back
/// through this one type.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void add_row(std::vector<std::string> row);
  int column_index(const std::string& name) const;  // -1 if absent
  std::vector<std::string> column(const std::string& name) const;
  /// Parses a column as doubles; "inf" and "nan" are accepted.
  std::vector<double> numbers(const std::string& name) const;

  void write(std::ostream& out) const;
  /// Throws std::runtime_error on ragged rows.
  static CsvTable read(std::istream& in);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// %.17g; bit-exact on round trip.
std::string format_double(double value);

}  // namespace sepdec
