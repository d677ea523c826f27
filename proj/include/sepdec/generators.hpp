#pragma once

#include "sepdec/problem_io.hpp"

#include <cstdint>
#include <string>

namespace sepdec {

enum class Family { basis_pursuit, exp_l1, toy };

const char* to_string(Family family);
/// Throws std::invalid_argument for unknown names.
Family parse_family(const std::string& name);

struct GeneratorSpec {
  Family family = Family::basis_pursuit;
  int m = 50;
  int n = 128;
  int k = 14;               // basis_pursuit: nonzeros of x0
  double density = 0.02;    // exp_l1: fraction of nonzeros of x0
  double gamma_density = 0.1;  // exp_l1: fraction of nonzero rates
  double gamma_max = 0.5;      // exp_l1: rates drawn from [0, gamma_max]
  double l1_weight = 1.0;
  double lower = -3.0;
  double upper = 3.0;
  std::uint64_t seed = 0;
};

/// A generated instance and the point it was built from (b = A x0). x0 lies
/// strictly inside the box, so it also serves as the strictly feasible point.
struct GeneratedProblem {
  ProblemData data;
  Vector x0;
};

/// Orthonormal-row A from the QR factorization of a Gaussian n x m matrix,
/// x0 with exactly k nonzeros of magnitude in [0.5, 2] and random sign, f = 0.
GeneratedProblem gen_basis_pursuit(const GeneratorSpec& spec);

/// A uniform in [-1, 1] scaled by its largest entry, x0 uniform in [-2, 2] on a
/// random support of round(density n) entries, f_i = exp(-gamma_i x) - 1 with
/// sparse rates.
GeneratedProblem gen_exp_l1(const GeneratorSpec& spec);

/// Small mixed instance: m in [1, 3], 1-D zero/affine/exp pieces with and
/// without l1 terms, 2-D affine pieces and 2-D concave quadratics, random boxes
/// around 0. n stays at most 10.
GeneratedProblem gen_toy(std::uint64_t seed);

/// Tiny variant of gen_toy with 1-D components only and n <= max_n.
GeneratedProblem gen_toy_scalar(std::uint64_t seed, int max_n = 3);

/// Dispatches on spec.family (toy ignores the sizes).
GeneratedProblem generate(const GeneratorSpec& spec);

struct GridDual {
  double value = 0.0;        // maximum over the grid
  double error_bound = 0.0;  // true g(y) lies in [value, value + error_bound]
};

/// Unsmoothed dual g(y) by per-component grid maximization of
/// phi_i(x) + y^T (A_i x - b_i) over the closed box with `resolution` cells.
/// Requires 1-D box components and n <= 6.
GridDual brute_force_dual(const SeparableProblem& problem, const VectorRef& y,
                          int resolution = 1000000);

}  // namespace sepdec
