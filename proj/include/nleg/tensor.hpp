#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "nleg/errors.hpp"

namespace nleg {

inline constexpr int kMaxDim = 8;

/// Dense square matrix of small runtime dimension (dim <= 8), row-major.
/// Holds frames, metrics and Lagrange tensors; indices are semantic only.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int dim) : dim_(check_dim(dim)), a_(static_cast<size_t>(dim) * dim, 0.0) {}

  static SquareMatrix identity(int dim) {
    SquareMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static SquareMatrix diagonal(std::initializer_list<double> d) {
    SquareMatrix m(static_cast<int>(d.size()));
    int i = 0;
    for (double v : d) m(i, i) = v, ++i;
    return m;
  }

  int dim() const { return dim_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

  SquareMatrix transposed() const {
    SquareMatrix t(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  SquareMatrix& operator+=(const SquareMatrix& o) {
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  SquareMatrix& operator-=(const SquareMatrix& o) {
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  SquareMatrix& operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
  }

  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
  friend SquareMatrix operator*(SquareMatrix a, double s) { return a *= s; }
  friend SquareMatrix operator*(double s, SquareMatrix a) { return a *= s; }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix c(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
      for (int k = 0; k < a.dim_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < a.dim_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  bool is_symmetric(double tol) const {
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
  }

  /// (A + A^T)/2, discarding antisymmetric round-off.
  SquareMatrix symmetrized() const {
    SquareMatrix s(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return s;
  }

 private:
  static int check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) throw Error("SquareMatrix: dim must be in [1, 8]");
    return dim;
  }

  int dim_ = 0;
  std::vector<double> a_;
};

/// Rank-3 container, all indices in [0, dim). Semantics live at the call site
/// (torsion S^i_{jk}, structure constants c^C_{AB}, momenta H_i^{jk}, ...).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int dim)
      : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int i, int j, int k) {
    return v_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
  }
  double operator()(int i, int j, int k) const {
    return v_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
  }

  Tensor3& operator+=(const Tensor3& o) {
    for (size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    for (size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (double& v : v_) v *= s;
    return *this;
  }
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

  double max_abs() const {
    double m = 0.0;
    for (double v : v_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int dim_ = 0;
  std::vector<double> v_;
};

/// Rank-4 container (frame second derivatives, Riemann tensor, torsion partials).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int dim)
      : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int i, int j, int k, int l) {
    return v_[((static_cast<size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return v_[((static_cast<size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : v_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int dim_ = 0;
  std::vector<double> v_;
};

/// Eigenvalue sign counts of a symmetric matrix; plus + minus + zero = dim.
struct Signature {
  int plus = 0;
  int minus = 0;
  int zero = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
};

namespace detail {

// LU with partial pivoting; returns false when a pivot collapses.
inline bool lu_decompose(SquareMatrix& m, int* perm, int& sign) {
  const int n = m.dim();
  sign = 1;
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(m(r, col));
      if (v > best) best = v, pivot = r;
    }
    if (best == 0.0) return false;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(m(col, j), m(pivot, j));
      std::swap(perm[col], perm[pivot]);
      sign = -sign;
    }
    const double d = m(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = m(r, col) / d;
      m(r, col) = f;
      for (int j = col + 1; j < n; ++j) m(r, j) -= f * m(col, j);
    }
  }
  return true;
}

}  // namespace detail

/// Determinant by pivoted LU; returns 0.0 when a pivot collapses exactly.
inline double determinant(const SquareMatrix& m) {
  SquareMatrix lu = m;
  int perm[kMaxDim];
  int sign = 1;
  if (!detail::lu_decompose(lu, perm, sign)) return 0.0;
  double det = sign;
  for (int i = 0; i < m.dim(); ++i) det *= lu(i, i);
  return det;
}

/// Matrix inverse; throws SingularMatrix when |det| <= tol.
inline SquareMatrix inverse(const SquareMatrix& m, double tol = 1e-12) {
  const int n = m.dim();
  SquareMatrix lu = m;
  int perm[kMaxDim];
  int sign = 1;
  if (!detail::lu_decompose(lu, perm, sign)) throw SingularMatrix("inverse: exactly singular matrix");
  double det = sign;
  for (int i = 0; i < n; ++i) det *= lu(i, i);
  if (std::abs(det) <= tol) throw SingularMatrix("inverse: |det| below tolerance");

  SquareMatrix inv(n);
  std::vector<double> col(n), y(n);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) col[i] = (perm[i] == c) ? 1.0 : 0.0;
    // forward substitution (unit lower)
    for (int i = 0; i < n; ++i) {
      y[i] = col[i];
      for (int j = 0; j < i; ++j) y[i] -= lu(i, j) * y[j];
    }
    // back substitution
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) y[i] -= lu(i, j) * y[j];
      y[i] /= lu(i, i);
    }
    for (int i = 0; i < n; ++i) inv(i, c) = y[i];
  }
  return inv;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations
/// (off-diagonal tolerance 1e-12 relative to scale, at most 100 sweeps).
inline std::vector<double> symmetric_eigenvalues(const SquareMatrix& m, double symmetry_tol = 1e-10) {
  if (!m.is_symmetric(symmetry_tol)) throw NotSymmetric("symmetric_eigenvalues: matrix is not symmetric");
  const int n = m.dim();
  SquareMatrix a = m.symmetrized();
  const double scale = std::max(1.0, a.max_abs());

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= 1e-12 * scale) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Signature of a symmetric matrix; |lambda| <= zero_tol counts as zero.
inline Signature eigen_signature(const SquareMatrix& m, double zero_tol = 1e-9) {
  Signature sig;
  for (double ev : symmetric_eigenvalues(m)) {
    if (std::abs(ev) <= zero_tol)
      ++sig.zero;
    else if (ev > 0.0)
      ++sig.plus;
    else
      ++sig.minus;
  }
  return sig;
}

}  // namespace nleg
