// Command line front end: build constructions from JSON configs, run the
// verification suites, export meshes and diagrams.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mkf/config.hpp"
#include "mkf/errors.hpp"
#include "mkf/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "mkf: hornified knots, microknot surfaces and their metric certification in R^4.\n"
      "Exit codes: 0 ok, 2 invalid config/usage, 3 construction failure,\n"
      "4 verification failed, 5 missing artifact, 6 unknown format, 7 i/o error."};
  app.require_subcommand(1);

  std::string config_path, out_dir = "run", run_dir, suite = "all", format = "csv";
  std::string project = "x3";
  std::uint64_t seed = 0;
  bool have_seed = false;
  bool verbose = false;
  app.add_flag("--verbose", verbose, "chatty progress output")->envname("MKF_VERBOSE");

  CLI::App* build = app.add_subcommand("build", "materialize a construction from a config");
  build->add_option("--config", config_path, "JSON config path")->envname("MKF_CONFIG");
  build->add_option("--out", out_dir, "output run directory")->envname("MKF_OUT");
  build->add_option("--seed", seed, "override the config seed")
      ->envname("MKF_SEED")
      ->each([&](const std::string&) { have_seed = true; });

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite on a run dir");
  verify->add_option("--run", run_dir, "run directory from build")->required();
  verify->add_option("--suite", suite, "lne | tord | cone | knot | all")
      ->envname("MKF_SUITE");

  CLI::App* exp = app.add_subcommand("export", "convert artifacts to csv/obj/ply/pd");
  exp->add_option("--run", run_dir, "run directory from build")->required();
  exp->add_option("--format", format, "csv | obj | ply | pd");
  exp->add_option("--project", project, "coordinate dropped by 3-D exports: x0..x3")
      ->envname("MKF_PROJECT");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      mkf::RunConfig cfg;
      if (!config_path.empty()) cfg = mkf::load_config(config_path);
      if (have_seed) cfg.seed = seed;
      cfg.validate();
      std::string dir = mkf::cmd_build(cfg, out_dir);
      if (verbose) std::cout << "built " << cfg.knot << " into " << dir << "\n";
      std::cout << dir << "\n";
      return 0;
    }
    if (verify->parsed()) {
      mkf::VerifyReport rep = mkf::cmd_verify(run_dir, suite);
      return rep.pass ? 0 : 4;
    }
    if (exp->parsed()) {
      if (project.size() != 2 || project[0] != 'x' || project[1] < '0' || project[1] > '3') {
        std::cerr << "--project must be one of x0, x1, x2, x3\n";
        return 2;
      }
      mkf::cmd_export(run_dir, format, project[1] - '0');
      return 0;
    }
  } catch (const mkf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mkf::cli_exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
