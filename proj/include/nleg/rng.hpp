#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nleg/tensor.hpp"

namespace nleg {

/// Seeded random source with platform-independent uniform doubles
/// (std::uniform_real_distribution is implementation-defined; reports must be
/// bit-identical for a given seed, so doubles are built from raw mt19937_64 bits).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 42) : gen_(seed) {}

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::vector<double> uniform_vector(int n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

  SquareMatrix uniform_matrix(int dim, double lo, double hi) {
    SquareMatrix m(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }

  /// Invertible matrix: redraw until the determinant is safely away from zero.
  SquareMatrix invertible_matrix(int dim, double lo = -1.0, double hi = 1.0) {
    for (;;) {
      SquareMatrix m = uniform_matrix(dim, lo, hi);
      if (std::abs(determinant(m)) > 0.05) return m;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nleg
