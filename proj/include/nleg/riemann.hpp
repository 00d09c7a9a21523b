#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "nleg/errors.hpp"
#include "nleg/fd.hpp"
#include "nleg/frame_field.hpp"
#include "nleg/lagrangian.hpp"
#include "nleg/teleparallel.hpp"
#include "nleg/tensor.hpp"

namespace nleg {

/// Levi-Civita curvature data at a point.
///
/// Sign convention: R^i_{jkl} = d_l Gamma^i_{jk} - d_k Gamma^i_{jl}
///                            + Gamma^i_{ml} Gamma^m_{jk} - Gamma^i_{mk} Gamma^m_{jl},
/// R_{jl} = R^i_{jil}. With this choice the Killing metric of a semisimple
/// group space satisfies R_ij - (1/2) R g_ij = -(1/8)(n-2) g_ij exactly, which
/// is the identity this module certifies; the unit 2-sphere gets R = -2.
struct CurvaturePoint {
  Tensor3 christoffel;  // Gamma^i_{jk}, symmetric in (j,k)
  Tensor4 riemann;      // R^i_{jkl}
  SquareMatrix ricci;   // R_{jl}
  double scalar = 0.0;
};

using MetricField = std::function<MetricPoint(const Point&)>;

namespace detail {

inline Tensor3 christoffel_at(const MetricField& g_field, const Point& x, double step) {
  const MetricPoint gp = g_field(x);
  const int n = gp.dim();
  SquareMatrix ginv(n);
  try {
    ginv = gp.inv ? *gp.inv : inverse(gp.g);
  } catch (const SingularMatrix&) {
    throw SingularMetric("christoffel: metric is singular on the stencil");
  }

  Tensor3 dg(n);  // dg(i,j,k) = d_k g_{ij}
  auto value = [&g_field](const Point& y) { return g_field(y).g; };
  for (int k = 0; k < n; ++k) {
    const SquareMatrix dk = central5_matrix(value, x, k, step);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(i, j, k) = dk(i, j);
  }

  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += 0.5 * ginv(i, l) * (dg(l, k, j) + dg(l, j, k) - dg(j, k, l));
        gamma(i, j, k) = s;
      }
  return gamma;
}

}  // namespace detail

/// Christoffels from FD metric partials, Riemann from FD Christoffel partials,
/// then the Ricci and scalar contractions. Everything is metric-source-agnostic.
inline CurvaturePoint levi_civita_curvature(const MetricField& g_field, const Point& x,
                                            double step = 1e-2) {
  const MetricPoint gp = g_field(x);
  const int n = gp.dim();
  SquareMatrix ginv(n);
  try {
    ginv = gp.inv ? *gp.inv : inverse(gp.g);
  } catch (const SingularMatrix&) {
    throw SingularMetric("levi_civita_curvature: metric is singular");
  }

  CurvaturePoint out;
  out.christoffel = detail::christoffel_at(g_field, x, step);

  Tensor4 dgamma(n);  // dgamma(i,j,k,l) = d_l Gamma^i_{jk}
  auto gamma_field = [&g_field, step](const Point& y) {
    return detail::christoffel_at(g_field, y, step);
  };
  for (int l = 0; l < n; ++l) {
    const Tensor3 dl = central5_tensor3(gamma_field, x, l, step);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) dgamma(i, j, k, l) = dl(i, j, k);
  }

  const Tensor3& g = out.christoffel;
  out.riemann = Tensor4(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = dgamma(i, j, k, l) - dgamma(i, j, l, k);
          for (int m = 0; m < n; ++m) s += g(i, m, l) * g(m, j, k) - g(i, m, k) * g(m, j, l);
          out.riemann(i, j, k, l) = s;
        }

  out.ricci = SquareMatrix(n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += out.riemann(i, j, i, l);
      out.ricci(j, l) = s;
    }
  out.scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) out.scalar += ginv(j, l) * out.ricci(j, l);
  return out;
}

/// Max-abs over the points of R_ij - (1/2) R gamma_ij + (1/8)(n-2) gamma_ij
/// for the Killing tensor of the frame; zero for semisimple group frames.
inline double einstein_check(const FrameField& frame, const std::vector<Point>& points,
                             double step = 1e-2) {
  MetricField gamma_field = [&frame](const Point& y) {
    return killing_tensor(torsion(frame.at(y)));
  };
  double worst = 0.0;
  for (const Point& x : points) {
    const MetricPoint gp = gamma_field(x);
    const int n = gp.dim();
    const CurvaturePoint cp = levi_civita_curvature(gamma_field, x, step);
    SquareMatrix resid = cp.ricci;
    resid -= 0.5 * cp.scalar * gp.g;
    resid += (n - 2) / 8.0 * gp.g;
    worst = std::max(worst, resid.max_abs());
  }
  return worst;
}

/// Two-sided check of the teleparallel split of the Hilbert density,
///   R[h] sqrt|h| = (J1 + 2 J2 - 4 J3) sqrt|h| + 4 (S^a_{ab} h^{bi} sqrt|h|)_{,i},
/// with the divergence taken by FD of the vector density field. Returns the
/// max-abs difference of the two sides over the points.
inline double hilbert_identity_check(const FrameField& frame, const BilinearForm& eta,
                                     const std::vector<Point>& points, double step = 1e-2) {
  MetricField h_field = [&frame, &eta](const Point& y) {
    return dirac_einstein_metric(frame.at(y), eta);
  };

  auto vector_density = [&frame, &h_field](const Point& y) {
    const TorsionPoint tp = torsion(frame.at(y));
    const MetricPoint hp = h_field(y);
    const int n = tp.dim();
    const SquareMatrix hinv = inverse(hp.g);
    const double root = std::sqrt(std::abs(determinant(hp.g)));
    std::vector<double> w(n, 0.0);  // w_b = S^a_{ab}
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) w[b] += tp.s(a, a, b);
    std::vector<double> v(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b) v[i] += w[b] * hinv(b, i) * root;
    return v;
  };

  double worst = 0.0;
  for (const Point& x : points) {
    const FramePoint fp = frame.at(x);
    const int n = fp.dim();
    const TorsionPoint tp = torsion(fp);
    const MetricPoint hp = h_field(x);
    const double root = std::sqrt(std::abs(determinant(hp.g)));

    const double lhs = levi_civita_curvature(h_field, x, step).scalar * root;

    const WeitzenbockInvariants j = weitzenbock_invariants(tp, hp);
    double divergence = 0.0;
    for (int i = 0; i < n; ++i) {
      auto component = [&vector_density, i](const Point& y) { return vector_density(y)[i]; };
      divergence += central5(component, x, i, step);
    }
    const double rhs = (j.j1 + 2.0 * j.j2 - 4.0 * j.j3) * root + 4.0 * divergence;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace nleg
