#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mkf/arc.hpp"

namespace mkf {

/// Run configuration, `"schema": 1` JSON. Unknown keys are rejected so
/// typos fail loudly.
struct RunConfig {
  int schema = 1;
  std::string knot = "torus-2-3";
  double beta = 2.0;
  double eta = 0.2;
  double ladder_base = 2.0;
  int ladder_depth = 12;
  int angular = 512;
  int scan = 720;
  int glue = 64;
  int closing = 64;
  double distortion_bound = 4.0;
  double uniformity_bound = 1.25;
  double transversality_deg = 5.0;
  double genericity_deg = 2.0;
  int knn = 8;
  int crossing_cap = 24;
  double tord_rel_tol = 0.05;
  double tord_r2 = 0.999;
  std::uint64_t seed = 1;

  std::vector<double> ladder() const { return dyadic_ladder(ladder_depth, ladder_base); }
  void validate() const;
  std::string to_json() const;  // normalized, key-ordered echo
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace mkf
