#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nleg/errors.hpp"
#include "nleg/lie_algebra.hpp"
#include "nleg/teleparallel.hpp"
#include "nleg/tensor.hpp"

namespace nleg {

/// L_ij = 4 lambda S^k_{im} S^m_{jk} + 4 mu S^k_{ik} S^m_{jm} + 4 nu S^k_{lk} S^l_{ij},
/// with L = prefactor * potential(S) * sqrt|det L_ij|. The first two terms are
/// symmetric, the third generally is not. The potential hook is a
/// zeroth-order-homogeneous scalar multiplier; empty means none, the
/// maximally square-root-like model.
struct GLBornInfeld {
  double lambda = 1.0;
  double mu = 0.0;
  double nu = 0.0;
  double prefactor = 1.0;
  std::function<double(const TorsionPoint&)> potential;
};

/// L = (c1 J1 + c2 J2 + c3 J3) sqrt|det h| with h = h[e, eta].
struct QuadraticTeleparallel {
  double c1 = 1.0;
  double c2 = 2.0;
  double c3 = -4.0;
  BilinearForm eta;
};

/// The locally Lorentz-invariant point of the quadratic family.
inline QuadraticTeleparallel hilbert_teleparallel(BilinearForm eta) {
  return QuadraticTeleparallel{1.0, 2.0, -4.0, std::move(eta)};
}

using ModelSpec = std::variant<GLBornInfeld, QuadraticTeleparallel>;

inline std::string model_family(const ModelSpec& spec) {
  return std::holds_alternative<GLBornInfeld>(spec) ? "gl_born_infeld" : "quadratic_teleparallel";
}

/// Square-rooted tensor with its density sqrt|det|; det = 0 is the
/// saturation boundary and is flagged, not thrown.
struct LagrangeTensor {
  SquareMatrix tensor;
  double det = 0.0;
  double density = 0.0;
  int sign = 0;
  bool degenerate = false;
};

/// density = prefactor * sqrt|det L|; degenerate marks the sqrt(0) boundary.
/// The boundary test is scale-aware: |det| is compared against 1e-12 times
/// the entry scale raised to the dimension, so an analytically singular
/// tensor reconstructed through FD round-off still gets flagged.
inline LagrangeTensor sqrt_det(const SquareMatrix& l, double prefactor = 1.0) {
  LagrangeTensor out;
  out.tensor = l;
  out.det = determinant(l);
  out.sign = out.det > 0.0 ? 1 : out.det < 0.0 ? -1 : 0;
  const double scale = std::max(1e-300, l.max_abs());
  out.degenerate = std::abs(out.det) <= 1e-12 * std::pow(scale, l.dim());
  out.density = prefactor * std::sqrt(std::abs(out.det));
  return out;
}

/// The quadratic-in-torsion tensor of the affine Born-Infeld family.
inline SquareMatrix born_infeld_tensor(const GLBornInfeld& m, const TorsionPoint& tp) {
  const int n = tp.dim();
  const MetricPoint gamma = killing_tensor(tp);
  SquareMatrix out = gamma.g * m.lambda;

  std::vector<double> v(n, 0.0);  // v_i = S^k_{ik}
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) v[i] += tp.s(k, i, k);

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double t = 4.0 * m.mu * v[i] * v[j];
      out(i, j) += t;
      if (j != i) out(j, i) += t;
    }

  const SquareMatrix big = gamma_big(tp);
  out += big * m.nu;
  return out;
}

/// The three quadratic torsion scalars built with a metric.
struct WeitzenbockInvariants {
  double j1 = 0.0;  // h_{ai} h^{bj} h^{ck} S^a_{bc} S^i_{jk}
  double j2 = 0.0;  // h^{ij} S^a_{ib} S^b_{ja}
  double j3 = 0.0;  // h^{ij} S^a_{ai} S^b_{bj}
};

inline WeitzenbockInvariants weitzenbock_invariants(const TorsionPoint& tp, const MetricPoint& h) {
  const int n = tp.dim();
  SquareMatrix hinv(n);
  try {
    hinv = h.inv ? *h.inv : inverse(h.g);
  } catch (const SingularMatrix&) {
    throw SingularMetric("weitzenbock_invariants: metric is singular");
  }

  WeitzenbockInvariants out;

  // raise the lower pair first: T^{a jk} = h^{bj} h^{ck} S^a_{bc}
  Tensor3 raised(n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) s += hinv(b, j) * hinv(c, k) * tp.s(a, b, c);
        raised(a, j, k) = s;
      }
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out.j1 += h.g(a, i) * raised(a, j, k) * tp.s(i, j, k);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += tp.s(a, i, b) * tp.s(b, j, a);
      out.j2 += hinv(i, j) * s;
    }

  std::vector<double> w(n, 0.0);  // w_i = S^a_{ai}
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) w[i] += tp.s(a, a, i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.j3 += hinv(i, j) * w[i] * w[j];

  return out;
}

// ---------------------------------------------------------------------------
// Potential scalars: the displayed zeroth-order-homogeneous building blocks,
// formed with the Killing tensor gamma_ij as the raising metric.
// ---------------------------------------------------------------------------

/// gamma_il gamma^jm gamma^kn S^i_{jk} S^l_{mn}
inline double potential_torsion_square(const TorsionPoint& tp) {
  const MetricPoint gamma = killing_tensor(tp);
  const WeitzenbockInvariants j = weitzenbock_invariants(tp, gamma);
  return j.j1;
}

/// gamma^ij S^k_{ik} S^m_{jm}
inline double potential_trace_square(const TorsionPoint& tp) {
  const int n = tp.dim();
  const MetricPoint gamma = killing_tensor(tp);
  SquareMatrix ginv(n);
  try {
    ginv = inverse(gamma.g);
  } catch (const SingularMatrix&) {
    throw SingularMetric("potential_trace_square: Killing tensor is singular");
  }
  std::vector<double> v(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) v[i] += tp.s(k, i, k);
  double out = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out += ginv(i, j) * v[i] * v[j];
  return out;
}

/// tr((gamma^{-1} Gamma)^p) for the mixed tensor Gamma^i_j = gamma^{im} Gamma_{mj}
inline double potential_gamma_power_trace(const TorsionPoint& tp, int power) {
  const int n = tp.dim();
  const MetricPoint gamma = killing_tensor(tp);
  SquareMatrix ginv(n);
  try {
    ginv = inverse(gamma.g);
  } catch (const SingularMatrix&) {
    throw SingularMetric("potential_gamma_power_trace: Killing tensor is singular");
  }
  const SquareMatrix mixed = ginv * gamma_big(tp);
  SquareMatrix acc = mixed;
  for (int p = 1; p < power; ++p) acc = acc * mixed;
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += acc(i, i);
  return trace;
}

/// Evaluate a model at a frame point. The quadratic family has no meaningful
/// Lagrange tensor; its wrapper carries h and the scalar density.
inline LagrangeTensor evaluate_model(const ModelSpec& spec, const TorsionPoint& tp,
                                     const FramePoint& fp) {
  if (const auto* bi = std::get_if<GLBornInfeld>(&spec)) {
    LagrangeTensor lt = sqrt_det(born_infeld_tensor(*bi, tp), bi->prefactor);
    if (bi->potential && !lt.degenerate) lt.density *= bi->potential(tp);
    return lt;
  }
  const auto& quad = std::get<QuadraticTeleparallel>(spec);
  const MetricPoint h = dirac_einstein_metric(fp, quad.eta);
  const WeitzenbockInvariants j = weitzenbock_invariants(tp, h);
  LagrangeTensor out;
  out.tensor = h.g;
  out.det = determinant(h.g);
  out.sign = out.det > 0.0 ? 1 : out.det < 0.0 ? -1 : 0;
  out.degenerate = out.det == 0.0;
  out.density = (quad.c1 * j.j1 + quad.c2 * j.j2 + quad.c3 * j.j3) * std::sqrt(std::abs(out.det));
  return out;
}

// ---------------------------------------------------------------------------
// Born-Infeld matter builders
// ---------------------------------------------------------------------------

/// Field content at one point for the matter-sector Lagrange tensors.
/// Only the pieces a given variant needs must be present.
struct MatterSample {
  MetricPoint g;

  std::optional<SquareMatrix> field_strength;  // F_{ij}, antisymmetric
  std::optional<std::pair<double, double>> psi;  // complex scalar value (re, im)
  std::optional<std::vector<double>> dpsi_re;  // Re d_i Psi (or D_i Psi)
  std::optional<std::vector<double>> dpsi_im;  // Im part, zero for a real scalar

  std::optional<std::vector<SquareMatrix>> gauge_strength;  // F^K_{ij}
  std::optional<BilinearForm> gauge_metric;                 // h_{KL}

  // ambient blocks of the target-space metric for the minimal-surface tensor
  std::optional<std::vector<std::vector<double>>> ambient_cross;  // h_{Sigma i}
  std::optional<SquareMatrix> ambient_internal;                   // h_{Sigma Lambda}
  std::optional<std::vector<std::vector<double>>> dpsi_multiplet;  // Psi^Sigma_{,i}
};

struct EmBornInfeld {
  double b = 1.0;
};
struct ScalarBornInfeld {
  double b = 1.0;
};
struct EmQuadratic {
  double alpha = 1.0, beta = 1.0, gamma = 1.0, delta = 0.0;
};
struct GaugeBornInfeld {
  double alpha = 1.0, gamma = 1.0;
};
struct MinimalSurface {};
/// L_ij = (1 - a conj(Psi) Psi) g_ij + b Re(conj(dPsi)_i dPsi_j): the coupled
/// form whose g slot takes the Killing tensor of a frame. Only the tensor is
/// built here; no solution search.
struct CoupledScalar {
  double a = 1.0, b = 1.0;
};

using MatterVariant = std::variant<EmBornInfeld, ScalarBornInfeld, EmQuadratic, GaugeBornInfeld,
                                   MinimalSurface, CoupledScalar>;

/// Matter Lagrangian split so the pure square-root part stays inspectable:
/// total = tensor.density + subtraction.
struct MatterLagrangian {
  LagrangeTensor tensor;
  double subtraction = 0.0;
  double total = 0.0;
};

namespace detail {

inline const SquareMatrix& require_field_strength(const MatterSample& s) {
  if (!s.field_strength) throw MissingField("matter sample lacks the field strength F_{ij}");
  const SquareMatrix& f = *s.field_strength;
  for (int i = 0; i < f.dim(); ++i)
    for (int j = 0; j < f.dim(); ++j)
      if (f(i, j) + f(j, i) != 0.0) throw Error("field strength must be exactly antisymmetric");
  return f;
}

// energy-scale subtraction that cancels the F = 0 value of -sqrt|det(b g)|
inline double scale_subtraction(double b, const MetricPoint& g) {
  const int n = g.dim();
  return std::pow(b, 0.5 * n) * std::sqrt(std::abs(determinant(g.g)));
}

}  // namespace detail

inline MatterLagrangian bi_matter_tensor(const MatterVariant& variant, const MatterSample& sample) {
  const int n = sample.g.dim();
  MatterLagrangian out;

  if (const auto* em = std::get_if<EmBornInfeld>(&variant)) {
    const SquareMatrix& f = detail::require_field_strength(sample);
    out.tensor = sqrt_det(sample.g.g * em->b + f, -1.0);
    out.subtraction = detail::scale_subtraction(em->b, sample.g);
    out.total = out.tensor.density + out.subtraction;
    return out;
  }

  if (const auto* sc = std::get_if<ScalarBornInfeld>(&variant)) {
    if (!sample.dpsi_re) throw MissingField("matter sample lacks d_i Psi");
    const std::vector<double>& re = *sample.dpsi_re;
    const std::vector<double> im =
        sample.dpsi_im ? *sample.dpsi_im : std::vector<double>(n, 0.0);
    SquareMatrix l = sample.g.g * sc->b;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) l(i, j) += re[i] * re[j] + im[i] * im[j];
    out.tensor = sqrt_det(l, -1.0);
    out.subtraction = detail::scale_subtraction(sc->b, sample.g);
    out.total = out.tensor.density + out.subtraction;
    return out;
  }

  if (const auto* q = std::get_if<EmQuadratic>(&variant)) {
    const SquareMatrix& f = detail::require_field_strength(sample);
    const SquareMatrix ginv = sample.g.inv ? *sample.g.inv : inverse(sample.g.g);
    SquareMatrix l = sample.g.g * q->alpha + f * q->beta;
    // gamma g^{kl} F_{ik} F_{lj}
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m) s += ginv(k, m) * f(i, k) * f(m, j);
        l(i, j) += q->gamma * s;
      }
    // delta F^2 g_{ij}
    double f2 = 0.0;
    for (int k = 0; k < n; ++k)
      for (int l2 = 0; l2 < n; ++l2)
        for (int r = 0; r < n; ++r)
          for (int s2 = 0; s2 < n; ++s2) f2 += ginv(k, r) * ginv(l2, s2) * f(k, l2) * f(r, s2);
    l += sample.g.g * (q->delta * f2);
    out.tensor = sqrt_det(l, 1.0);
    out.total = out.tensor.density;
    return out;
  }

  if (const auto* gv = std::get_if<GaugeBornInfeld>(&variant)) {
    if (!sample.gauge_strength || !sample.gauge_metric)
      throw MissingField("matter sample lacks the gauge multiplet F^K_{ij} or its metric h_KL");
    const auto& fk = *sample.gauge_strength;
    const BilinearForm& hkl = *sample.gauge_metric;
    const SquareMatrix ginv = sample.g.inv ? *sample.g.inv : inverse(sample.g.g);
    SquareMatrix l = sample.g.g * gv->alpha;
    const int m = static_cast<int>(fk.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int K = 0; K < m; ++K)
          for (int L = 0; L < m; ++L)
            for (int k = 0; k < n; ++k)
              for (int p = 0; p < n; ++p) s += ginv(k, p) * fk[K](i, k) * fk[L](p, j) * hkl(K, L);
        l(i, j) += gv->gamma * s;
      }
    out.tensor = sqrt_det(l, 1.0);
    out.total = out.tensor.density;
    return out;
  }

  if (const auto* cs = std::get_if<CoupledScalar>(&variant)) {
    if (!sample.psi || !sample.dpsi_re)
      throw MissingField("matter sample lacks Psi or d_i Psi for the coupled scalar tensor");
    const std::vector<double>& re = *sample.dpsi_re;
    const std::vector<double> im =
        sample.dpsi_im ? *sample.dpsi_im : std::vector<double>(n, 0.0);
    const double psi2 = sample.psi->first * sample.psi->first + sample.psi->second * sample.psi->second;
    SquareMatrix l = sample.g.g * (1.0 - cs->a * psi2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) l(i, j) += cs->b * (re[i] * re[j] + im[i] * im[j]);
    out.tensor = sqrt_det(l, 1.0);
    out.total = out.tensor.density;
    return out;
  }

  // minimal surface: L_ij = h_ij + 2 h_{Sigma(i} Psi^Sigma_{,j)} + h_{Sigma Lambda} Psi^Sigma_{,i} Psi^Lambda_{,j}
  if (!sample.ambient_cross || !sample.ambient_internal || !sample.dpsi_multiplet)
    throw MissingField("matter sample lacks the ambient blocks or multiplet gradients");
  const auto& cross = *sample.ambient_cross;
  const SquareMatrix& internal = *sample.ambient_internal;
  const auto& dpsi = *sample.dpsi_multiplet;
  const int m = static_cast<int>(dpsi.size());
  SquareMatrix l = sample.g.g;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int S = 0; S < m; ++S) s += cross[S][i] * dpsi[S][j] + cross[S][j] * dpsi[S][i];
      for (int S = 0; S < m; ++S)
        for (int L = 0; L < m; ++L) s += internal(S, L) * dpsi[S][i] * dpsi[L][j];
      l(i, j) += s;
    }
  out.tensor = sqrt_det(l, 1.0);
  out.total = out.tensor.density;
  return out;
}

// ---------------------------------------------------------------------------
// Static radial profile f(r) = sqrt(A b) 1_0^r du / sqrt(A + u^4)
// ---------------------------------------------------------------------------

namespace detail {

inline double simpson(double fa, double fm, double fb, double h) { return h * (fa + 4.0 * fm + fb) / 6.0; }

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive-Simpson quadrature of the saturating profile, abs tol 1e-10.
inline double radial_profile(double a_const, double b, double r) {
  if (!(a_const > 0.0) || !(b > 0.0) || r < 0.0)
    throw Error("radial_profile: needs A > 0, b > 0, r >= 0");
  if (r == 0.0) return 0.0;
  const double scale = std::sqrt(a_const * b);
  auto integrand = [a_const](double u) { return 1.0 / std::sqrt(a_const + u * u * u * u); };
  const double fa = integrand(0.0);
  const double fb = integrand(r);
  const double fm = integrand(0.5 * r);
  const double whole = detail::simpson(fa, fm, fb, r);
  return scale * detail::adaptive_simpson(integrand, 0.0, r, fa, fm, fb, whole, 1e-10, 40);
}

}  // namespace nleg
