#include "sepdec/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sepdec {
namespace {

using json = nlohmann::json;
using Severity = ValidationIssue::Severity;

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix to_matrix(const std::vector<double>& v, Eigen::Index rows, Eigen::Index cols) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(v.data(), rows, cols);
}

std::vector<double> to_std(const VectorRef& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> to_std_row_major(const Matrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::vector<double> number_array(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InvalidProblem(where + ": missing \"" + key + "\"");
  const json& arr = j.at(key);
  if (!arr.is_array()) throw InvalidProblem(where + ": \"" + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const json& v : arr) {
    if (!v.is_number()) throw InvalidProblem(where + ": \"" + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

ValidationReport validate(const ProblemData& data) {
  ValidationReport report;
  auto error = [&](int i, std::string msg) {
    report.issues.push_back({Severity::error, i, std::move(msg)});
  };

  if (data.m <= 0) error(-1, "m must be positive");
  if (data.components.empty()) error(-1, "problem has no components");

  for (std::size_t idx = 0; idx < data.components.size(); ++idx) {
    const auto& c = data.components[idx];
    const int i = static_cast<int>(idx);
    const auto n = static_cast<std::size_t>(std::max(c.n, 0));
    const auto m = static_cast<std::size_t>(std::max(data.m, 0));
    if (c.n <= 0) error(i, "n must be positive");
    if (c.a.size() != m * n)
      error(i, "A has " + std::to_string(c.a.size()) + " entries, expected m*n = " +
                   std::to_string(m * n));
    if (c.b.size() != m) error(i, "b must have length m");
    if (c.lower.size() != n || c.upper.size() != n) {
      error(i, "box bounds must have length n");
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(c.lower[j]) || !std::isfinite(c.upper[j]))
          error(i, "box is unbounded in coordinate " + std::to_string(j));
        else if (!(c.lower[j] < c.upper[j]))
          error(i, "empty box: l >= u in coordinate " + std::to_string(j));
      }
    }
    if (!all_finite(c.a) || !all_finite(c.b)) error(i, "A and b must be finite");
    if (!(c.l1_weight >= 0.0) || !std::isfinite(c.l1_weight))
      error(i, "l1_weight must be finite and nonnegative");

    if (c.kind == "zero") {
      if (!c.coeffs.empty()) error(i, "zero objective takes no coefficients");
    } else if (c.kind == "affine") {
      if (c.coeffs.size() != n) error(i, "affine objective needs n coefficients");
    } else if (c.kind == "exp") {
      if (c.coeffs.size() != n) error(i, "exp objective needs n rates");
      for (double r : c.coeffs)
        if (!(r >= 0.0)) error(i, "exp rates must be nonnegative");
    } else if (c.kind == "quadratic") {
      if (c.coeffs.size() != n || c.q.size() != n * n)
        error(i, "quadratic objective needs c (n) and Q (n*n)");
      if (c.l1_weight != 0.0) error(i, "quadratic objective cannot carry an l1 term");
    } else {
      error(i, "unknown objective kind \"" + c.kind + "\"");
    }
  }
  return report;
}

SeparableProblem build_problem(const ProblemData& data) {
  const ValidationReport report = validate(data);
  if (!report.ok()) throw InvalidProblem(report.to_string());

  std::vector<Component> components;
  components.reserve(data.components.size());
  for (const auto& c : data.components) {
    Objective objective = [&] {
      if (c.kind == "affine") return Objective::affine(to_vector(c.coeffs), c.l1_weight);
      if (c.kind == "exp") return Objective::exponential(to_vector(c.coeffs), c.l1_weight);
      if (c.kind == "quadratic")
        return Objective::quadratic(to_matrix(c.q, c.n, c.n), to_vector(c.coeffs));
      return Objective::zero(c.n, c.l1_weight);
    }();
    components.push_back(Component{
        to_matrix(c.a, data.m, c.n), to_vector(c.b), std::move(objective),
        std::make_shared<BoxBarrier>(to_vector(c.lower), to_vector(c.upper))});
  }
  return SeparableProblem(data.m, std::move(components));
}

ProblemData describe(const SeparableProblem& problem) {
  ProblemData data;
  data.m = problem.m();
  for (int i = 0; i < problem.num_components(); ++i) {
    const Component& c = problem.component(i);
    const BoxBarrier* box = c.box();
    if (box == nullptr)
      throw std::invalid_argument("describe: component " + std::to_string(i) +
                                  " is not box-constrained");
    ProblemData::ComponentData out;
    out.n = c.dimension();
    out.a = to_std_row_major(c.a);
    out.b = to_std(c.b);
    out.lower = to_std(box->lower());
    out.upper = to_std(box->upper());
    out.kind = to_string(c.objective.kind());
    out.coeffs = to_std(c.objective.coefficients());
    if (c.objective.kind() == ObjectiveKind::quadratic)
      out.q = to_std_row_major(c.objective.q());
    out.l1_weight = c.objective.l1_weight();
    data.components.push_back(std::move(out));
  }
  return data;
}

json to_json(const ProblemData& data) {
  json components = json::array();
  for (const auto& c : data.components) {
    json objective = {{"kind", c.kind}, {"l1_weight", c.l1_weight}};
    if (c.kind == "affine") objective["c"] = c.coeffs;
    if (c.kind == "exp") objective["rate"] = c.coeffs;
    if (c.kind == "quadratic") {
      objective["c"] = c.coeffs;
      objective["Q"] = c.q;
    }
    components.push_back({{"n", c.n},
                          {"A", c.a},
                          {"b", c.b},
                          {"box", {{"l", c.lower}, {"u", c.upper}}},
                          {"objective", std::move(objective)}});
  }
  json j = {{"m", data.m}, {"components", std::move(components)}};
  if (!data.metadata.empty()) j["metadata"] = data.metadata;
  return j;
}

ProblemData problem_data_from_json(const json& j) {
  if (!j.is_object()) throw InvalidProblem("problem file must hold a JSON object");
  if (!j.contains("m") || !j.at("m").is_number_integer())
    throw InvalidProblem("problem: \"m\" must be an integer");
  if (!j.contains("components") || !j.at("components").is_array())
    throw InvalidProblem("problem: \"components\" must be an array");

  ProblemData data;
  data.m = j.at("m").get<int>();
  int index = 0;
  for (const json& jc : j.at("components")) {
    const std::string where = "component " + std::to_string(index++);
    if (!jc.is_object()) throw InvalidProblem(where + ": must be an object");
    ProblemData::ComponentData c;
    if (!jc.contains("n") || !jc.at("n").is_number_integer())
      throw InvalidProblem(where + ": \"n\" must be an integer");
    c.n = jc.at("n").get<int>();
    c.a = number_array(jc, "A", where);
    c.b = number_array(jc, "b", where);
    if (!jc.contains("box") || !jc.at("box").is_object())
      throw InvalidProblem(where + ": missing \"box\"");
    c.lower = number_array(jc.at("box"), "l", where + ".box");
    c.upper = number_array(jc.at("box"), "u", where + ".box");

    if (jc.contains("objective")) {
      const json& obj = jc.at("objective");
      if (!obj.is_object() || !obj.contains("kind") || !obj.at("kind").is_string())
        throw InvalidProblem(where + ": objective needs a string \"kind\"");
      c.kind = obj.at("kind").get<std::string>();
      if (obj.contains("l1_weight")) {
        if (!obj.at("l1_weight").is_number())
          throw InvalidProblem(where + ": l1_weight must be a number");
        c.l1_weight = obj.at("l1_weight").get<double>();
      }
      if (c.kind == "affine") c.coeffs = number_array(obj, "c", where + ".objective");
      if (c.kind == "exp") c.coeffs = number_array(obj, "rate", where + ".objective");
      if (c.kind == "quadratic") {
        c.coeffs = number_array(obj, "c", where + ".objective");
        c.q = number_array(obj, "Q", where + ".objective");
      }
    }
    data.components.push_back(std::move(c));
  }
  if (j.contains("metadata")) data.metadata = j.at("metadata");
  return data;
}

std::string serialize(const ProblemData& data) { return to_json(data).dump(); }

ProblemData load_problem_data(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidProblem("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidProblem(path.string() + ": " + e.what());
  }
  return problem_data_from_json(j);
}

void save_problem_data(const ProblemData& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize(data) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace sepdec
