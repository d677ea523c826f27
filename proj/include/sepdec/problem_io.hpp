#pragma once

#include "sepdec/problem.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepdec {

/// File-level description of a box-constrained separable program. Mirrors the
/// JSON problem schema one-to-one; may hold invalid data until validated.
struct ProblemData {
  struct ComponentData {
    int n = 0;
    std::vector<double> a;  // row-major m x n
    std::vector<double> b;
    std::vector<double> lower;
    std::vector<double> upper;
    std::string kind = "zero";   // zero | affine | exp | quadratic
    std::vector<double> coeffs;  // "c" for affine/quadratic, "rate" for exp
    std::vector<double> q;       // row-major n x n, quadratic only
    double l1_weight = 0.0;
  };

  int m = 0;
  std::vector<ComponentData> components;
  nlohmann::json metadata = nlohmann::json::object();
};

/// Thrown when a problem description fails validation or cannot be parsed.
class InvalidProblem : public std::runtime_error {
 public:
  explicit InvalidProblem(const std::string& what) : std::runtime_error(what) {}
};

/// Dimension mismatches, empty boxes (l >= u), unknown objective kinds, bad
/// objective parameters. Rank deficiency is reported by validate(problem).
ValidationReport validate(const ProblemData& data);

/// Throws InvalidProblem if validate(data) reports errors.
SeparableProblem build_problem(const ProblemData& data);

/// Inverse of build_problem; every barrier must be a BoxBarrier.
ProblemData describe(const SeparableProblem& problem);

nlohmann::json to_json(const ProblemData& data);
/// Throws InvalidProblem on schema violations.
ProblemData problem_data_from_json(const nlohmann::json& j);

/// Canonical text form: compact JSON with shortest round-trip doubles.
std::string serialize(const ProblemData& data);

ProblemData load_problem_data(const std::filesystem::path& path);
void save_problem_data(const ProblemData& data, const std::filesystem::path& path);

}  // namespace sepdec
