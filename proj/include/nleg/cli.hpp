#pragma once

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "json.hpp"

#include "nleg/errors.hpp"
#include "nleg/lagrangian.hpp"
#include "nleg/lie_algebra.hpp"
#include "nleg/vacuum_suite.hpp"

namespace nleg {

/// Flat run configuration mirrored from flags and the optional JSON config
/// file. Flags take precedence over file values; unknown file keys reject.
struct RunConfig {
  std::string algebra = "su2";
  std::string family = "gl_born_infeld";
  double lambda = 1.0, mu = 0.0, nu = 0.0;
  double c1 = 1.0, c2 = 2.0, c3 = -4.0;
  std::string eta = "auto";  // auto | killing | minkowski | euclidean
  std::string rho = "exp";
  std::string variant = "e";
  int points = 20;
  std::uint64_t seed = 42;
  double fd_step = 1e-3;
  double tol = 1e-6;
  double radius = 1.0;
  std::string out = "report";

  void validate() const {
    if (points < 1) throw ConfigError("config: points must be >= 1");
    if (!(fd_step > 0.0)) throw ConfigError("config: fd-step must be positive");
    if (!(tol > 0.0)) throw ConfigError("config: tol must be positive");
    if (!(radius > 0.0)) throw ConfigError("config: radius must be positive");
  }
};

/// Merge a flat JSON config file into cfg; keys listed in `overridden`
/// (given as flags) keep their flag values.
inline void merge_config_file(RunConfig& cfg, const std::string& path,
                              const std::set<std::string>& overridden) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config: bad JSON in '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a flat JSON object");

  auto want = [&](const std::string& key) { return overridden.find(key) == overridden.end(); };
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "algebra") {
        if (want(key)) cfg.algebra = value.get<std::string>();
      } else if (key == "family") {
        if (want(key)) cfg.family = value.get<std::string>();
      } else if (key == "lambda") {
        if (want(key)) cfg.lambda = value.get<double>();
      } else if (key == "mu") {
        if (want(key)) cfg.mu = value.get<double>();
      } else if (key == "nu") {
        if (want(key)) cfg.nu = value.get<double>();
      } else if (key == "c1") {
        if (want(key)) cfg.c1 = value.get<double>();
      } else if (key == "c2") {
        if (want(key)) cfg.c2 = value.get<double>();
      } else if (key == "c3") {
        if (want(key)) cfg.c3 = value.get<double>();
      } else if (key == "eta") {
        if (want(key)) cfg.eta = value.get<std::string>();
      } else if (key == "rho") {
        if (want(key)) cfg.rho = value.get<std::string>();
      } else if (key == "variant") {
        if (want(key)) cfg.variant = value.get<std::string>();
      } else if (key == "points") {
        if (want(key)) cfg.points = value.get<int>();
      } else if (key == "seed") {
        if (want(key)) cfg.seed = value.get<std::uint64_t>();
      } else if (key == "fd_step") {
        if (want(key)) cfg.fd_step = value.get<double>();
      } else if (key == "tol") {
        if (want(key)) cfg.tol = value.get<double>();
      } else if (key == "radius") {
        if (want(key)) cfg.radius = value.get<double>();
      } else if (key == "out") {
        if (want(key)) cfg.out = value.get<std::string>();
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ConfigError("config: bad value for '" + key + "': " + e.what());
    }
  }
}

/// Resolve the eta preset for a given algebra and suite.
inline BilinearForm resolve_eta(const RunConfig& cfg, const std::string& suite) {
  const StructureConstants sc = catalog(cfg.algebra);
  const int n = suite == "theorem2" ? sc.dim + 1 : sc.dim;
  if (cfg.eta == "minkowski") return BilinearForm::minkowski(n);
  if (cfg.eta == "euclidean") return BilinearForm::euclidean(n);
  if (cfg.eta == "killing") {
    if (suite == "theorem2") return matter_eta(sc);
    return killing_form(sc);
  }
  if (cfg.eta == "auto") {
    if (suite == "theorem2") return matter_eta(sc);
    if (is_semisimple(sc)) return killing_form(sc);
    return BilinearForm::euclidean(n);
  }
  throw ConfigError("config: unknown eta preset '" + cfg.eta + "'");
}

inline ModelSpec make_model(const RunConfig& cfg, const std::string& suite) {
  if (cfg.family == "gl_born_infeld" || cfg.family == "bi")
    return GLBornInfeld{cfg.lambda, cfg.mu, cfg.nu, 1.0};
  if (cfg.family == "quadratic_teleparallel" || cfg.family == "quadratic")
    return QuadraticTeleparallel{cfg.c1, cfg.c2, cfg.c3, resolve_eta(cfg, suite)};
  if (cfg.family == "hilbert_teleparallel" || cfg.family == "hilbert")
    return hilbert_teleparallel(resolve_eta(cfg, suite));
  throw ConfigError("config: unknown family '" + cfg.family + "'");
}

inline std::string signature_string(const Signature& s) {
  return "(" + std::to_string(s.plus) + "," + std::to_string(s.minus) + "," +
         std::to_string(s.zero) + ")";
}

/// `catalog [name]`: list algebras with dimension, semisimplicity and
/// Killing signature. Exit 0; unknown names throw UnknownAlgebra.
inline int run_catalog(const std::optional<std::string>& name, std::ostream& os) {
  auto describe = [&os](const std::string& entry) {
    const StructureConstants sc = catalog(entry);
    const BilinearForm eta = killing_form(sc);
    const Signature sig = eigen_signature(eta.matrix());
    os << entry << ": dim " << sc.dim << ", " << (is_semisimple(sc) ? "semisimple" : "not semisimple")
       << ", killing signature " << signature_string(sig) << "\n";
  };
  if (name) {
    describe(*name);
    return 0;
  }
  for (const std::string& entry : catalog_names()) describe(entry);
  return 0;
}

/// `verify theorem1|theorem2 ...`: run the suite, write <out>.json and
/// <out>.csv, print the verdict. Exit 0 on pass, 1 on fail.
inline int run_verify(const std::string& suite, const RunConfig& cfg, std::ostream& os) {
  cfg.validate();
  if (cfg.points < 20)
    throw ConfigError("verify: a pass needs at least 20 sample points (got " +
                      std::to_string(cfg.points) + ")");

  const ModelSpec model = make_model(cfg, suite);
  const SamplingSpec sampling{cfg.points, cfg.seed, 0.5, cfg.radius};

  ResidualReport report;
  if (suite == "theorem1") {
    report = verify_theorem1(cfg.algebra, model, sampling, cfg.tol, cfg.fd_step);
  } else if (suite == "theorem2") {
    report = verify_theorem2(cfg.algebra, RhoSpec::from_name(cfg.rho),
                             deform_variant_from_name(cfg.variant), model, sampling, cfg.tol,
                             cfg.fd_step);
  } else {
    throw ConfigError("verify: unknown suite '" + suite + "' (expected theorem1 or theorem2)");
  }

  write_report_json(report, cfg.out + ".json");
  write_report_csv(report, cfg.out + ".csv");

  os << suite << " " << cfg.algebra << " [" << model_family(model) << "] "
     << (report.pass ? "PASS" : "FAIL") << ": max residual " << report.max_residual() << " vs tol "
     << report.tolerance << ", " << report.points.size() << " points ("
     << report.degenerate_count() << " degenerate)";
  if (!report.points.empty()) os << ", signature " << signature_string(report.points.front().signature);
  os << "\n";
  return report.pass ? 0 : 1;
}

/// `invariants`: CSV of J1, J2, J3, model density and gamma[e] signature per
/// sample point, h = h[e, eta] with eta resolved per config.
inline int run_invariants(const RunConfig& cfg, std::ostream& os) {
  cfg.validate();
  const StructureConstants sc = catalog(cfg.algebra);
  const FrameField frame = group_frame(sc, cfg.radius, FdOptions{cfg.fd_step, 2.0 * cfg.fd_step},
                                       cfg.algebra + " group frame");
  const ModelSpec model = make_model(cfg, "invariants");
  const BilinearForm eta = resolve_eta(cfg, "invariants");

  std::ostream* target = &os;
  std::ofstream file;
  if (!cfg.out.empty() && cfg.out != "-") {
    file.open(cfg.out, std::ios::binary);
    if (!file) throw Error("cannot open '" + cfg.out + "' for writing");
    target = &file;
  }
  *target << std::setprecision(17);
  *target << "index";
  for (int i = 0; i < sc.dim; ++i) *target << ",x" << i;
  *target << ",j1,j2,j3,density,sig_plus,sig_minus,sig_zero\n";

  const std::vector<Point> pts = sample_points(frame.chart(), cfg.points, cfg.seed, 0.5);
  for (size_t idx = 0; idx < pts.size(); ++idx) {
    const FramePoint fp = frame.at(pts[idx]);
    const TorsionPoint tp = torsion(fp);
    const MetricPoint h = dirac_einstein_metric(fp, eta);
    const WeitzenbockInvariants j = weitzenbock_invariants(tp, h);
    const LagrangeTensor lt = evaluate_model(model, tp, fp);
    const Signature sig = eigen_signature(killing_tensor(tp).g);
    *target << idx;
    for (double c : pts[idx]) *target << "," << c;
    *target << "," << j.j1 << "," << j.j2 << "," << j.j3 << "," << lt.density << "," << sig.plus
            << "," << sig.minus << "," << sig.zero << "\n";
  }
  return 0;
}

/// `profile`: CSV of (r, f(r)) for the static radial profile.
inline int run_profile(double a_const, double b, double r_max, int steps, const std::string& out,
                       std::ostream& os) {
  if (!(a_const > 0.0) || !(b > 0.0) || !(r_max > 0.0) || steps < 1)
    throw ConfigError("profile: needs A > 0, b > 0, r-max > 0, steps >= 1");

  std::ostream* target = &os;
  std::ofstream file;
  if (!out.empty() && out != "-") {
    file.open(out, std::ios::binary);
    if (!file) throw Error("cannot open '" + out + "' for writing");
    target = &file;
  }
  *target << std::setprecision(17);
  *target << "r,f\n";
  for (int i = 0; i <= steps; ++i) {
    const double r = r_max * i / steps;
    *target << r << "," << radial_profile(a_const, b, r) << "\n";
  }
  return 0;
}

}  // namespace nleg
