#pragma once

#include <string>
#include <vector>

#include "mkf/config.hpp"
#include "mkf/diagram.hpp"
#include "mkf/hornification.hpp"
#include "mkf/knot.hpp"
#include "mkf/metric.hpp"

namespace mkf {

/// Jones polynomial of a preset (one chirality; compare up to mirror).
LaurentPoly preset_jones(const std::string& name);

/// Builds every artifact for the configuration under out_dir: the
/// hornified knot, the cone over the knot, and (the universality
/// construction) body, glue and closing pieces, plus manifest.json and a
/// normalized config echo. Returns out_dir.
std::string cmd_build(const RunConfig& cfg, const std::string& out_dir);

/// A run directory loaded back into memory.
struct RunArtifacts {
  std::string dir;
  RunConfig config;
  KnotCurve knot;
  std::vector<double> ladder;
  SampledSurface hornification;
  SampledSurface cone;
  UniversalTriangle ut;
  std::vector<std::uint64_t> projection_seeds;
};

RunArtifacts load_run(const std::string& run_dir);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass = true;

  void add(std::string name, bool ok, std::string detail);
};

/// Runs the selected verification suite ("lne", "tord", "cone", "knot" or
/// "all") against a run directory; writes JSON and CSV reports under
/// <run>/reports and a human-readable summary to stdout.
VerifyReport cmd_verify(const std::string& run_dir, const std::string& suite,
                        bool quiet = false);

/// Converts stored artifacts to csv, obj, ply or pd under <run>/exports.
void cmd_export(const std::string& run_dir, const std::string& format, int drop_coord = 3);

/// Process exit code for a library error: 2 invalid config, 5 missing
/// artifact, 6 unknown format, 7 i/o, 3 any other construction failure.
int cli_exit_code(const Error& e);

}  // namespace mkf
