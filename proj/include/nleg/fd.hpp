#pragma once

#include <functional>
#include <vector>

#include "nleg/tensor.hpp"

namespace nleg {

using Point = std::vector<double>;

/// Central 5-point (4th order) derivative of a scalar-valued function along one axis.
template <class F>
double central5(F&& f, const Point& x, int axis, double h) {
  Point p = x;
  p[axis] = x[axis] - 2.0 * h;
  const double fm2 = f(p);
  p[axis] = x[axis] - h;
  const double fm1 = f(p);
  p[axis] = x[axis] + h;
  const double fp1 = f(p);
  p[axis] = x[axis] + 2.0 * h;
  const double fp2 = f(p);
  return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

/// Same stencil for matrix-valued functions, one matrix per shifted evaluation.
template <class F>
SquareMatrix central5_matrix(F&& f, const Point& x, int axis, double h) {
  Point p = x;
  p[axis] = x[axis] - 2.0 * h;
  SquareMatrix acc = f(p);
  p[axis] = x[axis] - h;
  acc -= 8.0 * f(p);
  p[axis] = x[axis] + h;
  acc += 8.0 * f(p);
  p[axis] = x[axis] + 2.0 * h;
  acc -= f(p);
  return acc * (1.0 / (12.0 * h));
}

template <class F>
Tensor3 central5_tensor3(F&& f, const Point& x, int axis, double h) {
  Point p = x;
  p[axis] = x[axis] - 2.0 * h;
  Tensor3 acc = f(p);
  p[axis] = x[axis] - h;
  acc -= 8.0 * f(p);
  p[axis] = x[axis] + h;
  acc += 8.0 * f(p);
  p[axis] = x[axis] + 2.0 * h;
  acc -= f(p);
  return acc * (1.0 / (12.0 * h));
}

/// Stencil steps used throughout: 4th-order first derivatives at `step`,
/// second derivatives by nesting first derivatives at `second_step`.
struct FdOptions {
  double step = 1e-3;
  double second_step = 2e-3;
};

}  // namespace nleg
