#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nleg/errors.hpp"
#include "nleg/fd.hpp"
#include "nleg/lie_algebra.hpp"
#include "nleg/rng.hpp"
#include "nleg/tensor.hpp"

namespace nleg {

/// Axis-aligned coordinate box carrying a frame field.
struct Chart {
  int dim = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::string label;

  Chart() = default;
  Chart(std::vector<double> lo, std::vector<double> hi, std::string lbl)
      : dim(static_cast<int>(lo.size())), lower(std::move(lo)), upper(std::move(hi)), label(std::move(lbl)) {
    if (lower.size() != upper.size()) throw Error("Chart: lower/upper size mismatch");
    for (int i = 0; i < dim; ++i)
      if (!(lower[i] < upper[i])) throw Error("Chart: needs lower < upper per axis");
  }

  static Chart centered_box(int dim, double radius, std::string label) {
    return Chart(std::vector<double>(dim, -radius), std::vector<double>(dim, radius), std::move(label));
  }

  Point center() const {
    Point c(dim);
    for (int i = 0; i < dim; ++i) c[i] = 0.5 * (lower[i] + upper[i]);
    return c;
  }
};

/// Frame evaluated at one point: legs e^i_A (column A), partials
/// de(i,A,j) = d_j e^i_A and optionally dde(i,A,j,k) = d_j d_k e^i_A.
struct FramePoint {
  SquareMatrix e;
  Tensor3 de;
  std::optional<Tensor4> dde;

  int dim() const { return e.dim(); }
};

/// Co-frame e^A_i, the matrix inverse of the legs; e^A_i e^i_B = delta^A_B.
inline SquareMatrix coframe(const FramePoint& fp, double tol = 1e-12) {
  try {
    return inverse(fp.e, tol);
  } catch (const SingularMatrix&) {
    throw DegenerateFrame("coframe: frame matrix is singular");
  }
}

/// A field of frames e_A = e^i_A d/dx^i over a chart. Evaluation is pure;
/// derivatives come from an analytic closure when the constructor provides
/// one and from central 5-point stencils otherwise.
class FrameField {
 public:
  using ValueFn = std::function<SquareMatrix(const Point&)>;
  using DerivFn = std::function<Tensor3(const Point&)>;
  using Deriv2Fn = std::function<Tensor4(const Point&)>;

  FrameField(Chart chart, ValueFn legs, FdOptions fd = {})
      : chart_(std::move(chart)), legs_(std::move(legs)), fd_(fd) {}

  FrameField(Chart chart, ValueFn legs, DerivFn de, Deriv2Fn dde, FdOptions fd = {})
      : chart_(std::move(chart)),
        legs_(std::move(legs)),
        de_(std::move(de)),
        dde_(std::move(dde)),
        fd_(fd) {}

  const Chart& chart() const { return chart_; }
  const FdOptions& fd() const { return fd_; }

  SquareMatrix legs(const Point& x) const { return legs_(x); }

  FramePoint at(const Point& x, bool with_second = false) const {
    FramePoint fp;
    fp.e = legs_(x);
    const int n = fp.e.dim();
    if (std::abs(determinant(fp.e)) < 1e-12)
      throw DegenerateFrame("FrameField: det e vanishes at sample point");

    if (de_) {
      fp.de = de_(x);
    } else {
      fp.de = Tensor3(n);
      for (int j = 0; j < n; ++j) {
        const SquareMatrix dj = central5_matrix(legs_, x, j, fd_.step);
        for (int i = 0; i < n; ++i)
          for (int A = 0; A < n; ++A) fp.de(i, A, j) = dj(i, A);
      }
    }

    if (with_second) {
      if (dde_) {
        fp.dde = dde_(x);
      } else {
        Tensor4 dd(n);
        const double h2 = fd_.second_step;
        for (int j = 0; j < n; ++j) {
          auto first_k = [&](const Point& y, int k) { return central5_matrix(legs_, y, k, h2); };
          for (int k = 0; k < n; ++k) {
            auto fk = [&](const Point& y) { return first_k(y, k); };
            const SquareMatrix djk = central5_matrix(fk, x, j, h2);
            for (int i = 0; i < n; ++i)
              for (int A = 0; A < n; ++A) dd(i, A, j, k) = djk(i, A);
          }
        }
        fp.dde = std::move(dd);
      }
    }
    return fp;
  }

 private:
  Chart chart_;
  ValueFn legs_;
  DerivFn de_;
  Deriv2Fn dde_;
  FdOptions fd_;
};

/// Holonomic baseline e^i_A = delta^i_A; zero torsion downstream.
inline FrameField constant_frame(int n) {
  Chart chart = Chart::centered_box(n, 1.0, "constant frame");
  auto value = [n](const Point&) { return SquareMatrix::identity(n); };
  auto de = [n](const Point&) { return Tensor3(n); };
  auto dde = [n](const Point&) { return Tensor4(n); };
  return FrameField(std::move(chart), value, de, dde);
}

/// Matrix of ad_x acting on the algebra: (ad_x)^A_B = x^C c^A_{CB}.
inline SquareMatrix ad_matrix(const StructureConstants& sc, const Point& x) {
  SquareMatrix ad(sc.dim);
  for (int A = 0; A < sc.dim; ++A)
    for (int B = 0; B < sc.dim; ++B) {
      double s = 0.0;
      for (int C = 0; C < sc.dim; ++C) s += x[C] * sc.c(A, C, B);
      ad(A, B) = s;
    }
  return ad;
}

/// Co-frame of the canonical chart of the first kind: e^A_i(x) = [f(ad_x)]^A_i
/// with f(z) = (1 - exp(-z))/z summed as a power series (early exit once the
/// term norm drops below 1e-18).
inline SquareMatrix mc_coframe(const StructureConstants& sc, const Point& x) {
  const SquareMatrix ad = ad_matrix(sc, x);
  if (ad.frobenius() > 0.9 * 2.0 * M_PI)
    throw SeriesNonConvergent("mc_coframe: |ad_x| too large, canonical chart unreliable");

  SquareMatrix sum = SquareMatrix::identity(sc.dim);
  SquareMatrix term = sum;
  for (int k = 1; k <= 40; ++k) {
    term = term * ad * (-1.0 / (k + 1.0));
    sum += term;
    if (term.max_abs() < 1e-18) break;
  }
  return sum;
}

/// Group-invariant frame on canonical coordinates of the first kind. The legs
/// are dual to the Maurer-Cartan co-frame, so their Lie brackets reproduce the
/// structure constants: [e_A, e_B] = c^C_{AB} e_C at every chart point.
inline FrameField group_frame(const StructureConstants& sc, double radius, FdOptions fd = {},
                              std::string label = "group frame") {
  if (jacobi_residual(sc) >= 1e-12)
    throw JacobiViolation("group_frame: structure constants violate the Jacobi identity");
  Chart chart = Chart::centered_box(sc.dim, radius, std::move(label));
  auto value = [sc](const Point& x) { return inverse(mc_coframe(sc, x)); };
  return FrameField(std::move(chart), value, fd);
}

/// Block frame on (tau, x): E_0 = d/dtau and the spatial legs form a group
/// frame of the given (n-1)-dimensional algebra; [E_0, E_Sigma] = 0.
inline FrameField extended_frame(const StructureConstants& sc, double radius, FdOptions fd = {},
                                 std::string label = "extended frame", double tau_min = -1.0,
                                 double tau_max = 1.0) {
  if (jacobi_residual(sc) >= 1e-12)
    throw JacobiViolation("extended_frame: structure constants violate the Jacobi identity");
  const int n = sc.dim + 1;
  std::vector<double> lo(n, -radius), hi(n, radius);
  lo[0] = tau_min;
  hi[0] = tau_max;
  Chart chart(std::move(lo), std::move(hi), std::move(label));
  auto value = [sc, n](const Point& x) {
    Point spatial(x.begin() + 1, x.end());
    const SquareMatrix block = inverse(mc_coframe(sc, spatial));
    SquareMatrix e(n);
    e(0, 0) = 1.0;
    for (int i = 1; i < n; ++i)
      for (int A = 1; A < n; ++A) e(i, A) = block(i - 1, A - 1);
    return e;
  };
  return FrameField(std::move(chart), value, fd);
}

/// Conformal factor rho(tau) with its derivative; must stay positive with
/// nonvanishing slope ("without critical points") on the tau range.
struct RhoSpec {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> slope;
  double tau_min = -1.0;
  double tau_max = 1.0;

  static RhoSpec exponential() {
    return {"exp", [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); }, -1.0, 1.0};
  }
  static RhoSpec exponential2() {
    return {"exp2", [](double t) { return std::exp(2.0 * t); },
            [](double t) { return 2.0 * std::exp(2.0 * t); }, -1.0, 1.0};
  }
  static RhoSpec affine() {
    return {"affine", [](double t) { return 1.0 + 0.5 * t; }, [](double) { return 0.5; }, 0.0, 1.0};
  }
  static RhoSpec exponential_contracting() {
    return {"exp-neg", [](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); }, -1.0,
            1.0};
  }
  /// rho = tau^2: critical point at tau = 0, used by negative tests.
  static RhoSpec tau_squared() {
    return {"tau2", [](double t) { return t * t; }, [](double t) { return 2.0 * t; }, -1.0, 1.0};
  }

  static RhoSpec from_name(const std::string& n) {
    if (n == "exp") return exponential();
    if (n == "exp2") return exponential2();
    if (n == "affine") return affine();
    if (n == "exp-neg") return exponential_contracting();
    if (n == "tau2") return tau_squared();
    throw ConfigError("rho: unknown preset '" + n + "' (expected exp, exp2, affine)");
  }
};

enum class DeformVariant {
  base,     // undeformed E
  scaled,   // e = rho E (every leg scaled)
  spatial,  // 'e: 'e_0 = E_0, 'e_Sigma = rho E_Sigma
};

inline DeformVariant deform_variant_from_name(const std::string& n) {
  if (n == "E") return DeformVariant::base;
  if (n == "e") return DeformVariant::scaled;
  if (n == "e-prime") return DeformVariant::spatial;
  throw ConfigError("variant: expected one of E, e, e-prime");
}

struct DeformationSpec {
  RhoSpec rho;
  DeformVariant variant = DeformVariant::scaled;
};

/// Rescale the legs of an extended frame by rho(tau) per variant.
/// The whole tau-range must be free of critical points: rho > 0 and
/// drho/dtau != 0 (checked on a dense grid up front and again per evaluation).
inline FrameField deform(const FrameField& frame, const DeformationSpec& spec) {
  if (spec.variant != DeformVariant::base) {
    const double lo = frame.chart().lower[0];
    const double hi = frame.chart().upper[0];
    double prev_slope = 0.0;
    const int grid = 1000;
    for (int i = 0; i <= grid; ++i) {
      const double t = lo + (hi - lo) * i / grid;
      const double r = spec.rho.value(t);
      const double dr = spec.rho.slope(t);
      if (!(r > 0.0) || dr == 0.0 || (i > 0 && dr * prev_slope < 0.0))
        throw CriticalRho("deform: rho has a critical point or zero on the tau range");
      prev_slope = dr;
    }
  }
  Chart chart = frame.chart();
  chart.label += spec.variant == DeformVariant::scaled    ? " [e, rho=" + spec.rho.name + "]"
                 : spec.variant == DeformVariant::spatial ? " ['e, rho=" + spec.rho.name + "]"
                                                          : "";
  const RhoSpec rho = spec.rho;
  const DeformVariant variant = spec.variant;
  auto value = [base = frame, rho, variant](const Point& x) {
    SquareMatrix e = base.legs(x);
    if (variant == DeformVariant::base) return e;
    const double r = rho.value(x[0]);
    const double dr = rho.slope(x[0]);
    if (!(r > 0.0) || dr == 0.0)
      throw CriticalRho("deform: rho must stay positive with nonvanishing slope");
    const int n = e.dim();
    const int first_scaled = variant == DeformVariant::scaled ? 0 : 1;
    for (int A = first_scaled; A < n; ++A)
      for (int i = 0; i < n; ++i) e(i, A) *= r;
    return e;
  };
  return FrameField(std::move(chart), value, frame.fd());
}

/// Global frame transformation e -> e A for constant A (the internal GL action).
inline FrameField transformed(const FrameField& frame, const SquareMatrix& a) {
  auto value = [base = frame, a](const Point& x) { return base.legs(x) * a; };
  Chart chart = frame.chart();
  chart.label += " [GL-transformed]";
  return FrameField(std::move(chart), value, frame.fd());
}

/// Seeded sample points in a centrally scaled sub-box of the chart, away from
/// the boundary so FD stencils stay inside.
inline std::vector<Point> sample_points(const Chart& chart, int count, std::uint64_t seed,
                                        double box_scale = 0.5) {
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  const Point c = chart.center();
  for (int k = 0; k < count; ++k) {
    Point x(chart.dim);
    for (int i = 0; i < chart.dim; ++i) {
      const double half = 0.5 * (chart.upper[i] - chart.lower[i]) * box_scale;
      x[i] = c[i] + rng.uniform(-half, half);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace nleg
