#include "sepdec/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sepdec {

const char* to_string(RunStatus status) {
  return status == RunStatus::converged ? "converged" : "failed";
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<std::string> trace_columns(TraceSchema schema) {
  if (schema == TraceSchema::gradient)
    return {"k", "t", "lambda", "g", "alpha", "sigma", "cF", "ms"};
  return {"k", "phase", "t", "lambda", "g", "alpha", "theta", "rho", "ms"};
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows,
                     TraceSchema schema) {
  CsvTable table(trace_columns(schema));
  char ms[32];
  for (const TraceRow& r : rows) {
    std::snprintf(ms, sizeof(ms), "%.3f", r.ms);
    if (schema == TraceSchema::gradient) {
      table.add_row({std::to_string(r.k), format_double(r.t), format_double(r.lambda),
                     format_double(r.g), format_double(r.alpha), format_double(r.sigma),
                     format_double(r.c_f), ms});
    } else {
      table.add_row({std::to_string(r.k), std::to_string(r.phase), format_double(r.t),
                     format_double(r.lambda), format_double(r.g), format_double(r.alpha),
                     format_double(r.theta), format_double(r.rho), ms});
    }
  }
  table.write(out);
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size())
    throw std::invalid_argument("CsvTable: row width differs from header");
  rows_.push_back(std::move(row));
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> CsvTable::column(const std::string& name) const {
  const int idx = column_index(name);
  if (idx < 0) throw std::out_of_range("CsvTable: no column \"" + name + "\"");
  std::vector<std::string> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.push_back(row[static_cast<std::size_t>(idx)]);
  return out;
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
  std::vector<double> out;
  for (const std::string& cell : column(name)) {
    if (cell == "inf") {
      out.push_back(std::numeric_limits<double>::infinity());
    } else if (cell == "-inf") {
      out.push_back(-std::numeric_limits<double>::infinity());
    } else if (cell == "nan") {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      // strtod rather than stod: subnormal values must not throw.
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw std::runtime_error("CsvTable: \"" + cell + "\" is not a number");
      out.push_back(v);
    }
  }
  return out;
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (const auto& row : rows_) line(row);
}

CsvTable CsvTable::read(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("CsvTable: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  CsvTable table(split(line));
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header_.size())
      throw std::runtime_error("CsvTable: ragged row \"" + line + "\"");
    table.rows_.push_back(std::move(cells));
  }
  return table;
}

}  // namespace sepdec
