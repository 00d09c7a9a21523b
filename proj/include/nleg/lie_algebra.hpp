#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nleg/errors.hpp"
#include "nleg/tensor.hpp"

namespace nleg {

/// Structure constants c^C_{AB} of an n-dimensional Lie algebra,
/// stored as c(C, A, B), antisymmetric in (A, B).
struct StructureConstants {
  int dim = 0;
  Tensor3 c;

  double bracket_coeff(int C, int A, int B) const { return c(C, A, B); }
};

/// Symmetric bilinear form on the algebra (Killing forms, internal metrics eta).
class BilinearForm {
 public:
  BilinearForm() = default;
  explicit BilinearForm(SquareMatrix m, double symmetry_tol = 1e-12) : m_(std::move(m)) {
    if (!m_.is_symmetric(symmetry_tol)) throw NotSymmetric("BilinearForm: matrix is not symmetric");
  }

  static BilinearForm minkowski(int dim) {
    SquareMatrix m = SquareMatrix::identity(dim);
    for (int i = 1; i < dim; ++i) m(i, i) = -1.0;
    return BilinearForm(std::move(m));
  }

  static BilinearForm euclidean(int dim) { return BilinearForm(SquareMatrix::identity(dim)); }

  int dim() const { return m_.dim(); }
  double operator()(int a, int b) const { return m_(a, b); }
  const SquareMatrix& matrix() const { return m_; }

 private:
  SquareMatrix m_;
};

inline double antisymmetry_residual(const StructureConstants& sc) {
  double r = 0.0;
  for (int C = 0; C < sc.dim; ++C)
    for (int A = 0; A < sc.dim; ++A)
      for (int B = 0; B < sc.dim; ++B)
        r = std::max(r, std::abs(sc.c(C, A, B) + sc.c(C, B, A)));
  return r;
}

/// Max over (A,B,C,D) of |sum_E c^E_{AB} c^D_{EC} + cyclic|; zero for a Lie algebra.
inline double jacobi_residual(const StructureConstants& sc) {
  const int n = sc.dim;
  double worst = 0.0;
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B)
      for (int C = 0; C < n; ++C)
        for (int D = 0; D < n; ++D) {
          double s = 0.0;
          for (int E = 0; E < n; ++E) {
            s += sc.c(E, A, B) * sc.c(D, E, C);
            s += sc.c(E, B, C) * sc.c(D, E, A);
            s += sc.c(E, C, A) * sc.c(D, E, B);
          }
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

/// Killing form eta_AB = sum_{C,D} c^C_{DA} c^D_{CB}.
inline BilinearForm killing_form(const StructureConstants& sc) {
  const int n = sc.dim;
  SquareMatrix eta(n);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      double s = 0.0;
      for (int C = 0; C < n; ++C)
        for (int D = 0; D < n; ++D) s += sc.c(C, D, A) * sc.c(D, C, B);
      eta(A, B) = s;
    }
  // symmetric by the index relabeling C<->D; enforce exactly
  return BilinearForm(eta.symmetrized());
}

/// Cartan's criterion: nondegenerate Killing form.
inline bool is_semisimple(const StructureConstants& sc, double tol = 1e-9) {
  return std::abs(determinant(killing_form(sc).matrix())) > tol;
}

inline StructureConstants direct_sum(const StructureConstants& a, const StructureConstants& b) {
  StructureConstants s{a.dim + b.dim, Tensor3(a.dim + b.dim)};
  for (int C = 0; C < a.dim; ++C)
    for (int A = 0; A < a.dim; ++A)
      for (int B = 0; B < a.dim; ++B) s.c(C, A, B) = a.c(C, A, B);
  for (int C = 0; C < b.dim; ++C)
    for (int A = 0; A < b.dim; ++A)
      for (int B = 0; B < b.dim; ++B) s.c(a.dim + C, a.dim + A, a.dim + B) = b.c(C, A, B);
  return s;
}

/// Adjoin a central generator at index 0: [E_0, E_Sigma] = 0, original
/// brackets shifted up by one. Never semisimple (Killing row 0 vanishes).
inline StructureConstants trivial_central_extension(const StructureConstants& sc) {
  StructureConstants ext{sc.dim + 1, Tensor3(sc.dim + 1)};
  for (int C = 0; C < sc.dim; ++C)
    for (int A = 0; A < sc.dim; ++A)
      for (int B = 0; B < sc.dim; ++B) ext.c(C + 1, A + 1, B + 1) = sc.c(C, A, B);
  return ext;
}

namespace detail {

inline StructureConstants abelian(int n) {
  if (n < 1 || n > kMaxDim) throw UnknownAlgebra("abelian: dimension out of range");
  return StructureConstants{n, Tensor3(n)};
}

inline StructureConstants epsilon_algebra() {
  // c^C_{AB} = epsilon_{CAB}; shared by su2 and so3.
  StructureConstants sc{3, Tensor3(3)};
  sc.c(0, 1, 2) = 1.0;
  sc.c(0, 2, 1) = -1.0;
  sc.c(1, 2, 0) = 1.0;
  sc.c(1, 0, 2) = -1.0;
  sc.c(2, 0, 1) = 1.0;
  sc.c(2, 1, 0) = -1.0;
  return sc;
}

inline StructureConstants heisenberg3() {
  // [X, Y] = Z in basis (X, Y, Z)
  StructureConstants sc{3, Tensor3(3)};
  sc.c(2, 0, 1) = 1.0;
  sc.c(2, 1, 0) = -1.0;
  return sc;
}

inline StructureConstants sl2r() {
  // basis (H, E, F): [H,E] = 2E, [H,F] = -2F, [E,F] = H
  StructureConstants sc{3, Tensor3(3)};
  sc.c(1, 0, 1) = 2.0;
  sc.c(1, 1, 0) = -2.0;
  sc.c(2, 0, 2) = -2.0;
  sc.c(2, 2, 0) = 2.0;
  sc.c(0, 1, 2) = 1.0;
  sc.c(0, 2, 1) = -1.0;
  return sc;
}

// splits "a,b" at the top-level comma of "direct_sum(a,b)"
inline bool split_sum_args(const std::string& args, std::string& left, std::string& right) {
  int depth = 0;
  for (size_t i = 0; i < args.size(); ++i) {
    const char ch = args[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      left = args.substr(0, i);
      right = args.substr(i + 1);
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Named algebras used as frame seeds. Grammar:
///   abelian(n) | heisenberg3 | su2 | so3 | sl2r | direct_sum(a,b)
inline StructureConstants catalog(const std::string& name) {
  auto strip = [](const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  const std::string n = strip(name);

  if (n == "su2" || n == "so3") return detail::epsilon_algebra();
  if (n == "heisenberg3") return detail::heisenberg3();
  if (n == "sl2r") return detail::sl2r();
  if (n.rfind("abelian(", 0) == 0 && n.back() == ')') {
    const std::string arg = n.substr(8, n.size() - 9);
    try {
      size_t used = 0;
      const int d = std::stoi(arg, &used);
      if (used == arg.size()) return detail::abelian(d);
    } catch (const std::exception&) {
    }
    throw UnknownAlgebra("catalog: bad abelian dimension '" + arg + "'");
  }
  if (n.rfind("direct_sum(", 0) == 0 && n.back() == ')') {
    const std::string args = n.substr(11, n.size() - 12);
    std::string left, right;
    if (!detail::split_sum_args(args, left, right))
      throw UnknownAlgebra("catalog: direct_sum needs two arguments");
    StructureConstants s = direct_sum(catalog(left), catalog(right));
    if (s.dim > kMaxDim) throw UnknownAlgebra("catalog: direct sum exceeds max dimension");
    return s;
  }
  throw UnknownAlgebra("catalog: unknown algebra '" + n + "'");
}

inline std::vector<std::string> catalog_names() {
  return {"abelian(2)", "abelian(3)", "heisenberg3", "su2", "so3", "sl2r", "direct_sum(su2,su2)"};
}

}  // namespace nleg
