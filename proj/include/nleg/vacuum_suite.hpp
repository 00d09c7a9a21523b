#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nleg/errors.hpp"
#include "nleg/frame_field.hpp"
#include "nleg/lagrangian.hpp"
#include "nleg/teleparallel.hpp"
#include "nleg/tensor.hpp"
#include "nleg/variation.hpp"

namespace nleg {

using json = nlohmann::ordered_json;

struct SamplingSpec {
  int count = 20;
  std::uint64_t seed = 42;
  double box_scale = 0.5;
  double radius = 1.0;
};

struct PointRecord {
  Point x;
  double max_abs = 0.0;
  double frobenius = 0.0;
  bool degenerate = false;
  Signature signature;  // of gamma[e] at the point
};

/// Residual verification record for one frame + model. Pass needs at least
/// 20 sampled points, at least one non-degenerate one, and every
/// non-degenerate residual below tolerance.
struct ResidualReport {
  std::string suite;  // "theorem1" | "theorem2" | "custom"
  std::string algebra;
  std::string frame_label;
  ModelSpec model;
  double tolerance = 1e-6;
  double fd_step = 1e-3;
  SamplingSpec sampling;
  std::string rho_name;      // theorem2 only
  std::string variant_name;  // theorem2 only

  std::vector<PointRecord> points;
  bool pass = false;

  // convergence table at the first clean point: residual at h and h/2
  double convergence_max_h = 0.0;
  double convergence_max_h2 = 0.0;

  // theorem2 extras
  double metric_form_deviation = 0.0;   // vs the closed-form Killing tensor
  double variant_gamma_deviation = 0.0; // gamma[e] vs gamma['e]

  int degenerate_count() const {
    int c = 0;
    for (const auto& p : points) c += p.degenerate ? 1 : 0;
    return c;
  }
  double max_residual() const {
    double m = 0.0;
    for (const auto& p : points)
      if (!p.degenerate) m = std::max(m, p.max_abs);
    return m;
  }
};

namespace detail {

inline void run_points(ResidualReport& report, const FrameField& frame, const ModelSpec& model,
                       const std::vector<Point>& pts, double fd_step) {
  bool convergence_done = false;
  for (const Point& x : pts) {
    PointRecord rec;
    rec.x = x;
    const TorsionPoint tp = torsion(frame.at(x));
    rec.signature = eigen_signature(killing_tensor(tp).g);
    try {
      const ResidualPoint rp = residual(frame, model, x, fd_step);
      rec.max_abs = rp.max_abs;
      rec.frobenius = rp.frobenius;
      if (!convergence_done) {
        report.convergence_max_h = rp.max_abs;
        report.convergence_max_h2 = residual(frame, model, x, 0.5 * fd_step).max_abs;
        convergence_done = true;
      }
    } catch (const DegenerateLagrangeTensor&) {
      rec.degenerate = true;
    } catch (const DegenerateFrame&) {
      rec.degenerate = true;
    }
    report.points.push_back(std::move(rec));
  }

  const int clean = static_cast<int>(report.points.size()) - report.degenerate_count();
  bool all_below = true;
  for (const auto& p : report.points)
    if (!p.degenerate && !(p.max_abs < report.tolerance)) all_below = false;
  report.pass = static_cast<int>(report.points.size()) >= 20 && clean >= 1 && all_below;
}

}  // namespace detail

/// Semisimple group-space vacua: builds the group frame of a catalog algebra
/// and certifies the field-equation residual at seeded chart points.
inline ResidualReport verify_theorem1(const std::string& algebra, const ModelSpec& model,
                                      const SamplingSpec& sampling = {}, double tolerance = 1e-6,
                                      double fd_step = 1e-3) {
  const StructureConstants sc = catalog(algebra);
  if (!is_semisimple(sc))
    throw NotSemisimple("verify_theorem1: '" + algebra + "' is not semisimple");

  const FrameField frame =
      group_frame(sc, sampling.radius, FdOptions{fd_step, 2.0 * fd_step}, algebra + " group frame");

  ResidualReport report;
  report.suite = "theorem1";
  report.algebra = algebra;
  report.frame_label = frame.chart().label;
  report.model = model;
  report.tolerance = tolerance;
  report.fd_step = fd_step;
  report.sampling = sampling;

  const std::vector<Point> pts =
      sample_points(frame.chart(), sampling.count, sampling.seed, sampling.box_scale);
  detail::run_points(report, frame, model, pts, fd_step);
  return report;
}

/// Max deviation of the deformed frame's Killing tensor from the closed form
///   (n-1) (dln rho/dtau)^2 E^0 x E^0 + C_{Lambda Sigma} E^Lambda x E^Sigma
/// written in the co-frame of the undeformed extension.
inline double metric_form_check(const FrameField& base_extended, const FrameField& deformed,
                                const StructureConstants& spatial, const RhoSpec& rho,
                                const std::vector<Point>& pts) {
  const BilinearForm c_form = killing_form(spatial);
  double worst = 0.0;
  for (const Point& x : pts) {
    const MetricPoint gamma = killing_tensor(torsion(deformed.at(x)));
    const int n = gamma.dim();

    const SquareMatrix co = coframe(base_extended.at(x));
    const double dlnrho = rho.slope(x[0]) / rho.value(x[0]);
    SquareMatrix closed(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = (n - 1) * dlnrho * dlnrho * co(0, i) * co(0, j);
        for (int L = 1; L < n; ++L)
          for (int S = 1; S < n; ++S) s += c_form(L - 1, S - 1) * co(L, i) * co(S, j);
        closed(i, j) = s;
      }
    worst = std::max(worst, (gamma.g - closed).max_abs());
  }
  return worst;
}

/// Deformed trivial central extensions: R x G vacua for any critical-point-free
/// rho, for both deformation variants; also checks the closed metric form and
/// that gamma[e] = gamma['e].
inline ResidualReport verify_theorem2(const std::string& algebra, const RhoSpec& rho,
                                      DeformVariant variant, const ModelSpec& model,
                                      const SamplingSpec& sampling = {}, double tolerance = 1e-6,
                                      double fd_step = 1e-3) {
  const StructureConstants sc = catalog(algebra);
  if (!is_semisimple(sc))
    throw NotSemisimple("verify_theorem2: '" + algebra + "' is not semisimple");

  const FdOptions fd{fd_step, 2.0 * fd_step};
  const FrameField base = extended_frame(sc, sampling.radius, fd, "R x " + algebra + " extension",
                                         rho.tau_min, rho.tau_max);
  const FrameField frame = deform(base, DeformationSpec{rho, variant});
  const FrameField other = deform(
      base, DeformationSpec{rho, variant == DeformVariant::spatial ? DeformVariant::scaled
                                                                   : DeformVariant::spatial});

  ResidualReport report;
  report.suite = "theorem2";
  report.algebra = algebra;
  report.frame_label = frame.chart().label;
  report.model = model;
  report.tolerance = tolerance;
  report.fd_step = fd_step;
  report.sampling = sampling;
  report.rho_name = rho.name;
  report.variant_name = variant == DeformVariant::scaled    ? "e"
                        : variant == DeformVariant::spatial ? "e-prime"
                                                            : "E";

  const std::vector<Point> pts =
      sample_points(frame.chart(), sampling.count, sampling.seed, sampling.box_scale);
  detail::run_points(report, frame, model, pts, fd_step);

  report.metric_form_deviation = metric_form_check(base, frame, sc, rho, pts);
  double vdev = 0.0;
  for (const Point& x : pts) {
    const MetricPoint a = killing_tensor(torsion(frame.at(x)));
    const MetricPoint b = killing_tensor(torsion(other.at(x)));
    vdev = std::max(vdev, (a.g - b.g).max_abs());
  }
  report.variant_gamma_deviation = vdev;
  return report;
}

/// Internal metric of the matter sector on R x G: eta_00 = beta,
/// eta_{0 Lambda} = 0, eta_{Lambda Sigma} = Killing form of the spatial algebra.
inline BilinearForm matter_eta(const StructureConstants& spatial, double beta = 1.0) {
  const BilinearForm c_form = killing_form(spatial);
  SquareMatrix m(spatial.dim + 1);
  m(0, 0) = beta;
  for (int a = 0; a < spatial.dim; ++a)
    for (int b = 0; b < spatial.dim; ++b) m(a + 1, b + 1) = c_form(a, b);
  return BilinearForm(std::move(m));
}

/// Contrast between the stationary Killing tensor and the conformally
/// expanding (contracting) Dirac-Einstein metric along tau.
struct ExpansionReport {
  std::vector<double> tau;
  std::vector<double> log_det_spatial;  // of the spatial block of h[e', eta]
  double det_slope = 0.0;               // least-squares slope of log det vs tau
  double per_axis_exponent = 0.0;       // det_slope / (n-1)
  double gamma_excursion = 0.0;         // max change of gamma in the E-coframe basis
  double h_time_time = 0.0;             // h_00 sample (carries the sign of beta)
};

inline ExpansionReport expansion_contrast(const std::string& algebra, const RhoSpec& rho,
                                          double beta = 1.0, int tau_samples = 10,
                                          const SamplingSpec& sampling = {}) {
  const StructureConstants sc = catalog(algebra);
  const FdOptions fd{};
  const FrameField base =
      extended_frame(sc, sampling.radius, fd, "R x " + algebra, rho.tau_min, rho.tau_max);
  const FrameField eprime = deform(base, DeformationSpec{rho, DeformVariant::spatial});
  const BilinearForm eta = matter_eta(sc, beta);
  const int n = sc.dim + 1;

  // one seeded spatial point, tau swept over the interior of the range
  Rng rng(sampling.seed);
  Point x(n, 0.0);
  for (int i = 1; i < n; ++i) x[i] = rng.uniform(-0.4 * sampling.radius, 0.4 * sampling.radius);

  ExpansionReport rep;
  const double lo = rho.tau_min + 0.15 * (rho.tau_max - rho.tau_min);
  const double hi = rho.tau_max - 0.15 * (rho.tau_max - rho.tau_min);

  SquareMatrix gamma_first(n);
  for (int s = 0; s < tau_samples; ++s) {
    x[0] = lo + (hi - lo) * s / (tau_samples - 1.0);
    const FramePoint fp = eprime.at(x);
    const MetricPoint h = dirac_einstein_metric(fp, eta);
    rep.h_time_time = h.g(0, 0);

    SquareMatrix spatial(n - 1);
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) spatial(i - 1, j - 1) = h.g(i, j);
    rep.tau.push_back(x[0]);
    rep.log_det_spatial.push_back(std::log(std::abs(determinant(spatial))));

    // gamma in the co-moving E basis: gamma_AB = gamma_ij E^i_A E^j_B
    const MetricPoint gamma = killing_tensor(torsion(fp));
    const SquareMatrix e_legs = base.legs(x);
    SquareMatrix gamma_ab(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double v = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) v += gamma.g(i, j) * e_legs(i, a) * e_legs(j, b);
        gamma_ab(a, b) = v;
      }
    if (s == 0)
      gamma_first = gamma_ab;
    else
      rep.gamma_excursion = std::max(rep.gamma_excursion, (gamma_ab - gamma_first).max_abs());
  }

  // least squares slope of log det vs tau
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const int m = static_cast<int>(rep.tau.size());
  for (int i = 0; i < m; ++i) {
    st += rep.tau[i];
    sy += rep.log_det_spatial[i];
    stt += rep.tau[i] * rep.tau[i];
    sty += rep.tau[i] * rep.log_det_spatial[i];
  }
  rep.det_slope = (m * sty - st * sy) / (m * stt - st * st);
  rep.per_axis_exponent = rep.det_slope / (n - 1);
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline json model_to_json(const ModelSpec& model) {
  json j;
  j["family"] = model_family(model);
  if (const auto* bi = std::get_if<GLBornInfeld>(&model)) {
    j["lambda"] = bi->lambda;
    j["mu"] = bi->mu;
    j["nu"] = bi->nu;
    j["prefactor"] = bi->prefactor;
  } else {
    const auto& q = std::get<QuadraticTeleparallel>(model);
    j["c1"] = q.c1;
    j["c2"] = q.c2;
    j["c3"] = q.c3;
    json eta = json::array();
    for (int a = 0; a < q.eta.dim(); ++a) {
      json row = json::array();
      for (int b = 0; b < q.eta.dim(); ++b) row.push_back(q.eta(a, b));
      eta.push_back(row);
    }
    j["eta"] = eta;
  }
  return j;
}

inline json report_to_json(const ResidualReport& r) {
  json j;
  j["suite"] = r.suite;
  j["model"] = model_to_json(r.model);
  j["frame"] = r.frame_label;
  j["algebra"] = r.algebra;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["max_residual"] = r.max_residual();

  json pts = json::array();
  for (const auto& p : r.points) {
    json e;
    e["x"] = p.x;
    e["max_abs"] = p.max_abs;
    e["frobenius"] = p.frobenius;
    e["degenerate"] = p.degenerate;
    e["signature"] = {p.signature.plus, p.signature.minus, p.signature.zero};
    pts.push_back(std::move(e));
  }
  j["points"] = std::move(pts);

  json meta;
  meta["fd_step"] = r.fd_step;
  meta["seed"] = r.sampling.seed;
  meta["points_requested"] = r.sampling.count;
  meta["box_scale"] = r.sampling.box_scale;
  meta["radius"] = r.sampling.radius;
  if (!r.rho_name.empty()) {
    meta["rho"] = r.rho_name;
    meta["variant"] = r.variant_name;
    meta["metric_form_deviation"] = r.metric_form_deviation;
    meta["variant_gamma_deviation"] = r.variant_gamma_deviation;
  }
  json conv;
  conv["step"] = r.fd_step;
  conv["max_abs"] = r.convergence_max_h;
  conv["step_half"] = 0.5 * r.fd_step;
  conv["max_abs_half"] = r.convergence_max_h2;
  meta["convergence"] = std::move(conv);
  meta["generator"] = "nleg 1.0";
  j["metadata"] = std::move(meta);
  return j;
}

inline void write_report_json(const ResidualReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << report_to_json(r).dump(2) << "\n";
}

/// Per-point norms as CSV: header row, UTF-8, LF line endings.
inline void write_report_csv(const ResidualReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  const int n = r.points.empty() ? 0 : static_cast<int>(r.points.front().x.size());
  out << "index";
  for (int i = 0; i < n; ++i) out << ",x" << i;
  out << ",max_abs,frobenius,degenerate,sig_plus,sig_minus,sig_zero\n";
  for (size_t idx = 0; idx < r.points.size(); ++idx) {
    const auto& p = r.points[idx];
    out << idx;
    for (double c : p.x) out << "," << c;
    out << "," << p.max_abs << "," << p.frobenius << "," << (p.degenerate ? 1 : 0) << ","
        << p.signature.plus << "," << p.signature.minus << "," << p.signature.zero << "\n";
  }
}

}  // namespace nleg
