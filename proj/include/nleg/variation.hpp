#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "nleg/errors.hpp"
#include "nleg/lagrangian.hpp"
#include "nleg/teleparallel.hpp"
#include "nleg/tensor.hpp"

namespace nleg {

/// Field momentum H_i^{jk} = dL/dS^i_{jk}, antisymmetric in (j,k).
/// The derivative treats all entries of S as formally independent and is
/// antisymmetrized, so sum_{ijk} S^i_{jk} H_i^{jk} = n L holds literally.
struct FieldMomentum {
  Tensor3 h;

  int dim() const { return h.dim(); }
};

/// Dirac-Einstein stress Q^{ij} = dL/dh_{ij}, symmetric.
struct StressTensor {
  SquareMatrix q;
};

struct ResidualPoint {
  SquareMatrix k;
  double max_abs = 0.0;
  double frobenius = 0.0;
};

namespace detail {

inline void antisymmetrize_momentum(Tensor3& h) {
  const int n = h.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        if (j == k) {
          h(i, j, j) = 0.0;
          continue;
        }
        const double v = 0.5 * (h(i, j, k) - h(i, k, j));
        h(i, j, k) = v;
        h(i, k, j) = -v;
      }
}

inline std::vector<double> torsion_trace(const TorsionPoint& tp) {
  const int n = tp.dim();
  std::vector<double> v(n, 0.0);  // v_i = S^k_{ik}
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) v[i] += tp.s(k, i, k);
  return v;
}

// dL/dM_{ab} = (1/2) density (M^{-1})_{ba} chained through the quadratic
// dependence of the Born-Infeld tensor on S.
inline Tensor3 momentum_born_infeld(const GLBornInfeld& m, const TorsionPoint& tp) {
  const int n = tp.dim();
  const SquareMatrix big = born_infeld_tensor(m, tp);
  const LagrangeTensor lt = sqrt_det(big, m.prefactor);
  if (lt.degenerate)
    throw DegenerateLagrangeTensor("field_momentum: det L_ij = 0, derivative undefined");
  SquareMatrix big_inv(n);
  try {
    big_inv = inverse(big);
  } catch (const SingularMatrix&) {
    throw DegenerateLagrangeTensor("field_momentum: det L_ij = 0, derivative undefined");
  }

  SquareMatrix w(n);  // W_{ab} = (1/2) density (M^{-1})_{ba}
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) w(a, b) = 0.5 * lt.density * big_inv(b, a);

  const std::vector<double> v = torsion_trace(tp);

  Tensor3 h(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += 4.0 * m.lambda * (w(j, b) * tp.s(k, b, i) + w(b, j) * tp.s(k, b, i));
        if (i == k) {
          double t = 0.0;
          for (int b = 0; b < n; ++b) t += (w(j, b) + w(b, j)) * v[b];
          s += 4.0 * m.mu * t;
          double u = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) u += w(a, b) * tp.s(j, a, b);
          s += 4.0 * m.nu * u;
        }
        s += 4.0 * m.nu * v[i] * w(j, k);
        h(i, j, k) = s;
      }
  antisymmetrize_momentum(h);
  return h;
}

// momentum of the quadratic family: (c1 dJ1 + c2 dJ2 + c3 dJ3) sqrt|h|
inline Tensor3 momentum_quadratic(const QuadraticTeleparallel& q, const TorsionPoint& tp,
                                  const MetricPoint& h) {
  const int n = tp.dim();
  SquareMatrix hinv(n);
  try {
    hinv = h.inv ? *h.inv : inverse(h.g);
  } catch (const SingularMatrix&) {
    throw SingularMetric("field_momentum: metric h is singular");
  }
  const double root = std::sqrt(std::abs(determinant(h.g)));

  // raised(a,j,k) = h^{bj} h^{ck} S^a_{bc}
  Tensor3 raised(n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) s += hinv(b, j) * hinv(c, k) * tp.s(a, b, c);
        raised(a, j, k) = s;
      }

  std::vector<double> w(n, 0.0);  // w_i = S^a_{ai}
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) w[i] += tp.s(a, a, i);

  Tensor3 out(n);
  for (int p = 0; p < n; ++p)
    for (int qq = 0; qq < n; ++qq)
      for (int r = 0; r < n; ++r) {
        double dj1 = 0.0;
        for (int i = 0; i < n; ++i) dj1 += 2.0 * h.g(p, i) * raised(i, qq, r);
        double dj2 = 0.0;
        for (int j = 0; j < n; ++j) dj2 += 2.0 * hinv(qq, j) * tp.s(r, j, p);
        double dj3 = 0.0;
        if (p == qq)
          for (int j = 0; j < n; ++j) dj3 += 2.0 * hinv(r, j) * w[j];
        out(p, qq, r) = (q.c1 * dj1 + q.c2 * dj2 + q.c3 * dj3) * root;
      }
  antisymmetrize_momentum(out);
  return out;
}

inline double model_density(const ModelSpec& spec, const TorsionPoint& tp,
                            const std::optional<MetricPoint>& h) {
  if (const auto* bi = std::get_if<GLBornInfeld>(&spec)) {
    const LagrangeTensor lt = sqrt_det(born_infeld_tensor(*bi, tp), bi->prefactor);
    if (bi->potential && !lt.degenerate) return lt.density * bi->potential(tp);
    return lt.density;
  }
  const auto& quad = std::get<QuadraticTeleparallel>(spec);
  if (!h) throw MissingField("quadratic model density needs the metric h");
  const WeitzenbockInvariants j = weitzenbock_invariants(tp, *h);
  return (quad.c1 * j.j1 + quad.c2 * j.j2 + quad.c3 * j.j3) *
         std::sqrt(std::abs(determinant(h->g)));
}

}  // namespace detail

inline FieldMomentum field_momentum_fd(const ModelSpec& spec, const TorsionPoint& tp,
                                       const std::optional<MetricPoint>& h = std::nullopt,
                                       double step = 1e-6);

/// Field momentum, analytic where the density is a bare square root; models
/// dressed with a potential hook fall back to the FD route.
inline FieldMomentum field_momentum(const ModelSpec& spec, const TorsionPoint& tp,
                                    const std::optional<MetricPoint>& h = std::nullopt) {
  if (const auto* bi = std::get_if<GLBornInfeld>(&spec)) {
    if (!bi->potential) return FieldMomentum{detail::momentum_born_infeld(*bi, tp)};
    return field_momentum_fd(spec, tp, h, 1e-6);
  }
  const auto& quad = std::get<QuadraticTeleparallel>(spec);
  if (!h) throw MissingField("field_momentum: quadratic family needs the metric h");
  return FieldMomentum{detail::momentum_quadratic(quad, tp, *h)};
}

/// Finite-difference momentum: perturbs the independent (j < k) components of S
/// antisymmetrically, so H_i^{jk} = -H_i^{kj} is exact by construction.
inline FieldMomentum field_momentum_fd(const ModelSpec& spec, const TorsionPoint& tp,
                                       const std::optional<MetricPoint>& h, double step) {
  const int n = tp.dim();
  Tensor3 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        TorsionPoint plus = tp;
        plus.s(i, j, k) += step;
        plus.s(i, k, j) -= step;
        TorsionPoint minus = tp;
        minus.s(i, j, k) -= step;
        minus.s(i, k, j) += step;
        const double d =
            (detail::model_density(spec, plus, h) - detail::model_density(spec, minus, h)) /
            (4.0 * step);
        out(i, j, k) = d;
        out(i, k, j) = -d;
      }
  return FieldMomentum{out};
}

/// Analytic Dirac-Einstein stress of the quadratic family, symmetrized.
inline StressTensor stress(const QuadraticTeleparallel& q, const TorsionPoint& tp,
                           const MetricPoint& h) {
  const int n = tp.dim();
  SquareMatrix hinv(n);
  try {
    hinv = h.inv ? *h.inv : inverse(h.g);
  } catch (const SingularMatrix&) {
    throw SingularMetric("stress: metric h is singular");
  }
  const double root = std::sqrt(std::abs(determinant(h.g)));
  const WeitzenbockInvariants j = weitzenbock_invariants(tp, h);
  const double scalar = q.c1 * j.j1 + q.c2 * j.j2 + q.c3 * j.j3;

  SquareMatrix out(n);
  for (int p = 0; p < n; ++p)
    for (int qq = 0; qq < n; ++qq) {
      double dj1 = 0.0;
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int jj = 0; jj < n; ++jj)
            for (int k = 0; k < n; ++k)
              dj1 += hinv(b, jj) * hinv(c, k) * tp.s(p, b, c) * tp.s(qq, jj, k);
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
          for (int b = 0; b < n; ++b)
            for (int jj = 0; jj < n; ++jj)
              for (int c = 0; c < n; ++c)
                for (int k = 0; k < n; ++k) {
                  const double ss = h.g(a, i) * tp.s(a, b, c) * tp.s(i, jj, k);
                  dj1 -= ss * hinv(b, p) * hinv(qq, jj) * hinv(c, k);
                  dj1 -= ss * hinv(b, jj) * hinv(c, p) * hinv(qq, k);
                }
      double dj2 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj) {
          double s = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += tp.s(a, i, b) * tp.s(b, jj, a);
          dj2 -= hinv(i, p) * hinv(qq, jj) * s;
        }
      std::vector<double> w(n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) w[i] += tp.s(a, a, i);
      double dj3 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj) dj3 -= hinv(i, p) * hinv(qq, jj) * w[i] * w[jj];

      out(p, qq) = (q.c1 * dj1 + q.c2 * dj2 + q.c3 * dj3) * root + 0.5 * scalar * root * hinv(p, qq);
    }
  return StressTensor{out.symmetrized()};
}

/// Field-equation residual K_i^j = div_k H_i^{jk} + 2 S^l_{lk} H_i^{jk}
/// (minus 2 h_{ik} Q^{kj} for the Lorentz-family models). The momentum is
/// recomputed from the frame at every stencil point.
inline ResidualPoint residual(const FrameField& frame, const ModelSpec& spec, const Point& x,
                              double step = 1e-3) {
  const FramePoint fp = frame.at(x);
  const int n = fp.dim();
  const ConnectionPoint conn = connection(fp);
  const TorsionPoint tp = torsion(fp);

  const QuadraticTeleparallel* quad = std::get_if<QuadraticTeleparallel>(&spec);

  auto momentum_at = [&](const Point& y) {
    const FramePoint fpy = frame.at(y);
    const TorsionPoint ty = torsion(fpy);
    std::optional<MetricPoint> hy;
    if (quad) hy = dirac_einstein_metric(fpy, quad->eta);
    return field_momentum(spec, ty, hy).h;
  };

  SquareMatrix k = teleparallel_divergence(momentum_at, conn, x, step);

  const Tensor3 h_here = momentum_at(x);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < n; ++l)
        for (int kk = 0; kk < n; ++kk) s += 2.0 * tp.s(l, l, kk) * h_here(i, j, kk);
      k(i, j) += s;
    }

  if (quad) {
    const MetricPoint hm = dirac_einstein_metric(fp, quad->eta);
    const StressTensor q = stress(*quad, tp, hm);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += 2.0 * hm.g(i, m) * q.q(m, j);
        k(i, j) -= s;
      }
  }

  ResidualPoint out{k, k.max_abs(), k.frobenius()};
  return out;
}

/// Secondary-constraint slice: the "time" column K_i^0 of the residual,
/// with coordinate 0 designated as time.
inline std::vector<double> secondary_constraint(const FrameField& frame, const ModelSpec& spec,
                                                const Point& x, double step = 1e-3) {
  const ResidualPoint rp = residual(frame, spec, x, step);
  std::vector<double> column(rp.k.dim());
  for (int i = 0; i < rp.k.dim(); ++i) column[i] = rp.k(i, 0);
  return column;
}

}  // namespace nleg
