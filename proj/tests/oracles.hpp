#pragma once

// Independent test-side oracles. These deliberately avoid the library's
// computation paths: cofactor expansion instead of LU, literal summation
// loops instead of factored contractions, direct stencils on the raw leg
// closures instead of FrameField::at.

#include <cmath>
#include <functional>
#include <vector>

#include "nleg/frame_field.hpp"
#include "nleg/lie_algebra.hpp"
#include "nleg/tensor.hpp"

namespace oracles {

using nleg::Point;
using nleg::SquareMatrix;
using nleg::Tensor3;

/// Determinant by recursive cofactor expansion along the first row.
inline double cofactor_determinant(const SquareMatrix& m) {
  const int n = m.dim();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  for (int c = 0; c < n; ++c) {
    SquareMatrix minor(n - 1);
    for (int i = 1; i < n; ++i) {
      int col = 0;
      for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        minor(i - 1, col++) = m(i, j);
      }
    }
    det += ((c % 2 == 0) ? 1.0 : -1.0) * m(0, c) * cofactor_determinant(minor);
  }
  return det;
}

/// Naive Killing contraction eta_AB = sum_{C,D} c^C_{DA} c^D_{CB}, literal loops.
inline SquareMatrix naive_killing(const nleg::StructureConstants& sc) {
  SquareMatrix eta(sc.dim);
  for (int A = 0; A < sc.dim; ++A)
    for (int B = 0; B < sc.dim; ++B)
      for (int C = 0; C < sc.dim; ++C)
        for (int D = 0; D < sc.dim; ++D) eta(A, B) += sc.c(C, D, A) * sc.c(D, C, B);
  return eta;
}

/// Lie bracket of two frame legs by direct 5-point stencils on the leg closure:
/// [e_A, e_B]^i = e^j_A d_j e^i_B - e^j_B d_j e^i_A.
inline std::vector<double> fd_bracket(const std::function<SquareMatrix(const Point&)>& legs,
                                      const Point& x, int A, int B, double h = 1e-4) {
  const SquareMatrix e = legs(x);
  const int n = e.dim();
  // d_j e^i_C for all i, C, j
  std::vector<SquareMatrix> de(n, SquareMatrix(n));
  for (int j = 0; j < n; ++j) {
    Point p = x;
    p[j] = x[j] - 2.0 * h;
    SquareMatrix acc = legs(p);
    p[j] = x[j] - h;
    acc -= 8.0 * legs(p);
    p[j] = x[j] + h;
    acc += 8.0 * legs(p);
    p[j] = x[j] + 2.0 * h;
    acc -= legs(p);
    de[j] = acc * (1.0 / (12.0 * h));
  }
  std::vector<double> bracket(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) bracket[i] += e(j, A) * de[j](i, B) - e(j, B) * de[j](i, A);
  return bracket;
}

/// Literal 6-loop Weitzenbock scalars.
struct NaiveInvariants {
  double j1 = 0.0, j2 = 0.0, j3 = 0.0;
};

inline NaiveInvariants naive_weitzenbock(const Tensor3& s, const SquareMatrix& h,
                                         const SquareMatrix& hinv) {
  const int n = s.dim();
  NaiveInvariants out;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b)
        for (int j = 0; j < n; ++j)
          for (int c = 0; c < n; ++c)
            for (int k = 0; k < n; ++k)
              out.j1 += h(a, i) * hinv(b, j) * hinv(c, k) * s(a, b, c) * s(i, j, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.j2 += hinv(i, j) * s(a, i, b) * s(b, j, a);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.j3 += hinv(i, j) * s(a, a, i) * s(b, b, j);
  return out;
}

/// Literal triple-loop build of the quadratic Lagrange tensor
/// 4 lambda S^k_{im} S^m_{jk} + 4 mu S^k_{ik} S^m_{jm} + 4 nu S^k_{lk} S^l_{ij}.
inline SquareMatrix naive_lagrange_tensor(const Tensor3& s, double lambda, double mu, double nu) {
  const int n = s.dim();
  SquareMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double t1 = 0.0, t2a = 0.0, t2b = 0.0, t3 = 0.0;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) t1 += s(k, i, m) * s(m, j, k);
      for (int k = 0; k < n; ++k) t2a += s(k, i, k);
      for (int m = 0; m < n; ++m) t2b += s(m, j, m);
      for (int l = 0; l < n; ++l) {
        double trace = 0.0;
        for (int k = 0; k < n; ++k) trace += s(k, l, k);
        t3 += trace * s(l, i, j);
      }
      out(i, j) = 4.0 * lambda * t1 + 4.0 * mu * t2a * t2b + 4.0 * nu * t3;
    }
  return out;
}

/// Fixed-step composite Simpson for the radial profile (panel count must be even).
inline double fixed_simpson_profile(double a_const, double b, double r, long panels) {
  if (r == 0.0) return 0.0;
  auto f = [a_const](double u) { return 1.0 / std::sqrt(a_const + u * u * u * u); };
  const double h = r / panels;
  double sum = f(0.0) + f(r);
  for (long i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
  return std::sqrt(a_const * b) * sum * h / 3.0;
}

/// Seeded antisymmetric-in-(j,k) torsion-like tensor.
inline Tensor3 seeded_torsion(int n, nleg::Rng& rng, double scale = 1.0) {
  Tensor3 s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double v = rng.uniform(-scale, scale);
        s(i, j, k) = v;
        s(i, k, j) = -v;
      }
  return s;
}

}  // namespace oracles
