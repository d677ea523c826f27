#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace sepdec {

/// Seeded generator whose output is fixed across platforms and standard
/// libraries: only the raw mt19937_64 stream is used, every distribution is
/// implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);
  /// k distinct indices from [0, n), sorted ascending.
  std::vector<int> sample(int n, int k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sepdec
