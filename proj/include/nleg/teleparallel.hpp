#pragma once

#include <cmath>
#include <functional>
#include <optional>

#include "nleg/errors.hpp"
#include "nleg/fd.hpp"
#include "nleg/frame_field.hpp"
#include "nleg/tensor.hpp"

namespace nleg {

/// Teleparallelism connection Gamma^i_{jk} at a point (last index differentiates).
struct ConnectionPoint {
  Tensor3 gamma;

  int dim() const { return gamma.dim(); }
};

/// Torsion S^i_{jk} = Gamma^i_{[jk]}, antisymmetric in (j,k) exactly;
/// ds(i,j,k,l) = d_l S^i_{jk} when partials were requested.
struct TorsionPoint {
  Tensor3 s;
  std::optional<Tensor4> ds;

  int dim() const { return s.dim(); }
};

/// Symmetric metric value with optional inverse and partials dg(i,j,k) = d_k g_{ij}.
struct MetricPoint {
  SquareMatrix g;
  std::optional<SquareMatrix> inv;
  std::optional<Tensor3> dg;

  int dim() const { return g.dim(); }

  const SquareMatrix& inverse_matrix() const {
    if (!inv) throw SingularMetric("MetricPoint: inverse not computed");
    return *inv;
  }
};

/// Gamma^i_{jk} = e^i_A e^A_{j,k}, the unique connection with flat parallel legs.
/// Computed as -e^i_{A,k} e^A_j, which needs only the leg partials.
inline ConnectionPoint connection(const FramePoint& fp) {
  const int n = fp.dim();
  const SquareMatrix co = coframe(fp);
  ConnectionPoint cp{Tensor3(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int A = 0; A < n; ++A) s -= fp.de(i, A, k) * co(A, j);
        cp.gamma(i, j, k) = s;
      }
  return cp;
}

/// S^i_{jk} = (1/2) e^i_A (e^A_{j,k} - e^A_{k,j}); the frame's invariant
/// first-derivative content.
inline TorsionPoint torsion(const FramePoint& fp) {
  const ConnectionPoint cp = connection(fp);
  const int n = fp.dim();
  TorsionPoint tp{Tensor3(n), std::nullopt};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double v = 0.5 * (cp.gamma(i, j, k) - cp.gamma(i, k, j));
        tp.s(i, j, k) = v;
        tp.s(i, k, j) = -v;
      }
  return tp;
}

/// Bracket coefficients gamma^C_{AB} of the legs, [e_A, e_B] = gamma^C_{AB} e_C,
/// recovered from torsion as gamma^C_{AB} = 2 S^i_{jk} e^C_i e^j_A e^k_B.
inline Tensor3 nonholonomy(const FramePoint& fp, const TorsionPoint& tp) {
  const int n = fp.dim();
  const SquareMatrix co = coframe(fp);
  Tensor3 gam(n);
  for (int C = 0; C < n; ++C)
    for (int A = 0; A < n; ++A)
      for (int B = 0; B < n; ++B) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) s += 2.0 * tp.s(i, j, k) * co(C, i) * fp.e(j, A) * fp.e(k, B);
        gam(C, A, B) = s;
      }
  return gam;
}

/// h[e, eta]_{ij} = eta_{AB} e^A_i e^B_j, the metric pulled back through the co-frame.
inline MetricPoint dirac_einstein_metric(const FramePoint& fp, const BilinearForm& eta) {
  const int n = fp.dim();
  const SquareMatrix co = coframe(fp);
  MetricPoint mp{SquareMatrix(n), std::nullopt, std::nullopt};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int A = 0; A < n; ++A)
        for (int B = 0; B < n; ++B) s += eta(A, B) * co(A, i) * co(B, j);
      mp.g(i, j) = s;
      mp.g(j, i) = s;
    }
  return mp;
}

/// Killing tensor gamma_{ij} = 4 S^k_{im} S^m_{jk}; symmetric by index relabeling,
/// and equal to the Killing-form pullback on group-invariant frames.
inline MetricPoint killing_tensor(const TorsionPoint& tp) {
  const int n = tp.dim();
  MetricPoint mp{SquareMatrix(n), std::nullopt, std::nullopt};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) s += 4.0 * tp.s(k, i, m) * tp.s(m, j, k);
      mp.g(i, j) = s;
      mp.g(j, i) = s;
    }
  return mp;
}

/// Gamma_{ij} = 4 S^k_{lk} S^l_{ij}; generally non-symmetric.
inline SquareMatrix gamma_big(const TorsionPoint& tp) {
  const int n = tp.dim();
  SquareMatrix out(n);
  for (int l = 0; l < n; ++l) {
    double trace = 0.0;
    for (int k = 0; k < n; ++k) trace += tp.s(k, l, k);
    if (trace == 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) += 4.0 * trace * tp.s(l, i, j);
  }
  return out;
}

using Tensor3Field = std::function<Tensor3(const Point&)>;

/// Teleparallel covariant divergence of a weight-one tensor density H_i^{jk}:
///   (div H)_i^j = d_k H_i^{jk} - Gamma^l_{ik} H_l^{jk} + Gamma^j_{lk} H_i^{lk}
///               + Gamma^k_{lk} H_i^{jl} - Gamma^l_{lk} H_i^{jk}
/// with the partials taken by the FD strategy on the supplied field.
inline SquareMatrix teleparallel_divergence(const Tensor3Field& h_field, const ConnectionPoint& conn,
                                            const Point& x, double step = 1e-3) {
  const int n = conn.dim();
  SquareMatrix div(n);

  // d_k H_i^{jk}: one stencil per coordinate direction, component k extracted
  for (int k = 0; k < n; ++k) {
    const Tensor3 dk = central5_tensor3(h_field, x, k, step);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) div(i, j) += dk(i, j, k);
  }

  const Tensor3 h = h_field(x);
  const Tensor3& g = conn.gamma;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          s -= g(l, i, k) * h(l, j, k);
          s += g(j, l, k) * h(i, l, k);
          s += g(k, l, k) * h(i, j, l);
          s -= g(l, l, k) * h(i, j, k);
        }
      div(i, j) += s;
    }
  return div;
}

/// Torsion with its FD partials ds(i,j,k,l) = d_l S^i_{jk}, obtained by
/// differentiating the torsion field rather than the frame twice.
inline TorsionPoint torsion_with_partials(const FrameField& frame, const Point& x) {
  TorsionPoint tp = torsion(frame.at(x));
  const int n = tp.dim();
  auto s_field = [&frame](const Point& y) { return torsion(frame.at(y)).s; };
  Tensor4 ds(n);
  for (int l = 0; l < n; ++l) {
    const Tensor3 dl = central5_tensor3(s_field, x, l, frame.fd().step);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) ds(i, j, k, l) = dl(i, j, k);
  }
  tp.ds = std::move(ds);
  return tp;
}

}  // namespace nleg
