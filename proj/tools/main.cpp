// nleg: catalog queries, invariant tables, vacuum-theorem verification and
// the Born-Infeld radial profile, with JSON/CSV reports.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error.

#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"

#include "nleg/cli.hpp"

namespace {

struct VerifyCli {
  std::string suite;
  std::string config_path;
  nleg::RunConfig cfg;
  std::set<std::string> given;  // config-file keys pinned by explicit flags
};

void add_model_flags(CLI::App* cmd, nleg::RunConfig& cfg) {
  cmd->add_option("--algebra", cfg.algebra, "catalog algebra name");
  cmd->add_option("--family", cfg.family, "gl_born_infeld | quadratic_teleparallel | hilbert_teleparallel");
  cmd->add_option("--lambda", cfg.lambda, "Born-Infeld lambda");
  cmd->add_option("--mu", cfg.mu, "Born-Infeld mu");
  cmd->add_option("--nu", cfg.nu, "Born-Infeld nu");
  cmd->add_option("--c1", cfg.c1, "quadratic-family c1");
  cmd->add_option("--c2", cfg.c2, "quadratic-family c2");
  cmd->add_option("--c3", cfg.c3, "quadratic-family c3");
  cmd->add_option("--eta", cfg.eta, "internal metric preset: auto | killing | minkowski | euclidean");
}

void add_sampling_flags(CLI::App* cmd, nleg::RunConfig& cfg) {
  cmd->add_option("--points", cfg.points, "sample point count");
  cmd->add_option("--seed", cfg.seed, "sampling seed");
  cmd->add_option("--fd-step", cfg.fd_step, "finite-difference step");
  cmd->add_option("--tol", cfg.tol, "residual tolerance");
  cmd->add_option("--radius", cfg.radius, "chart radius");
  cmd->add_option("--out", cfg.out, "output path base");
}

// maps flag spellings to config-file keys
const std::pair<const char*, const char*> kFlagKeys[] = {
    {"--algebra", "algebra"}, {"--family", "family"}, {"--lambda", "lambda"}, {"--mu", "mu"},
    {"--nu", "nu"},           {"--c1", "c1"},         {"--c2", "c2"},         {"--c3", "c3"},
    {"--eta", "eta"},         {"--rho", "rho"},       {"--variant", "variant"}, {"--points", "points"},
    {"--seed", "seed"},       {"--fd-step", "fd_step"}, {"--tol", "tol"},     {"--radius", "radius"},
    {"--out", "out"},
};

std::set<std::string> explicit_keys(const CLI::App* cmd) {
  std::set<std::string> keys;
  for (const auto& [flag, key] : kFlagKeys) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) keys.insert(key);
  }
  return keys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for GL(n,R)-invariant n-leg field theories"};
  app.require_subcommand(1);

  // catalog
  std::string catalog_name;
  CLI::App* catalog_cmd = app.add_subcommand("catalog", "list algebras or describe one");
  catalog_cmd->add_option("name", catalog_name, "algebra to describe");

  // verify
  VerifyCli verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run a vacuum-theorem suite");
  verify_cmd->add_option("suite", verify.suite, "theorem1 | theorem2")->required();
  add_model_flags(verify_cmd, verify.cfg);
  verify_cmd->add_option("--rho", verify.cfg.rho, "deformation profile: exp | exp2 | affine");
  verify_cmd->add_option("--variant", verify.cfg.variant, "deformation variant: E | e | e-prime");
  add_sampling_flags(verify_cmd, verify.cfg);
  verify_cmd->add_option("--config", verify.config_path, "flat JSON config file (flags override)");

  // invariants
  nleg::RunConfig inv_cfg;
  inv_cfg.out = "";
  std::string inv_config_path;
  CLI::App* invariants_cmd = app.add_subcommand("invariants", "tabulate Weitzenbock invariants");
  add_model_flags(invariants_cmd, inv_cfg);
  add_sampling_flags(invariants_cmd, inv_cfg);
  invariants_cmd->add_option("--config", inv_config_path, "flat JSON config file (flags override)");

  // profile
  double prof_a = 1.0, prof_b = 1.0, prof_rmax = 5.0;
  int prof_steps = 100;
  std::string prof_out;
  CLI::App* profile_cmd = app.add_subcommand("profile", "static radial profile f(r)");
  profile_cmd->add_option("--A", prof_a, "integration constant A");
  profile_cmd->add_option("--b", prof_b, "saturation constant b");
  profile_cmd->add_option("--r-max", prof_rmax, "upper end of the r grid");
  profile_cmd->add_option("--steps", prof_steps, "number of grid steps");
  profile_cmd->add_option("--out", prof_out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (catalog_cmd->parsed()) {
      std::optional<std::string> name;
      if (!catalog_name.empty()) name = catalog_name;
      return nleg::run_catalog(name, std::cout);
    }
    if (verify_cmd->parsed()) {
      if (!verify.config_path.empty())
        nleg::merge_config_file(verify.cfg, verify.config_path, explicit_keys(verify_cmd));
      return nleg::run_verify(verify.suite, verify.cfg, std::cout);
    }
    if (invariants_cmd->parsed()) {
      if (!inv_config_path.empty())
        nleg::merge_config_file(inv_cfg, inv_config_path, explicit_keys(invariants_cmd));
      return nleg::run_invariants(inv_cfg, std::cout);
    }
    if (profile_cmd->parsed()) {
      return nleg::run_profile(prof_a, prof_b, prof_rmax, prof_steps, prof_out, std::cout);
    }
  } catch (const nleg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
