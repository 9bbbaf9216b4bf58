#include "mkf/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "mkf/errors.hpp"

namespace mkf {

using ordered_json = nlohmann::ordered_json;

void RunConfig::validate() const {
  if (schema != 1) fail(Err::ConfigInvalid, "unsupported schema version");
  if (!(beta >= 1.0)) fail(Err::ConfigInvalid, "beta must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) fail(Err::ConfigInvalid, "eta must lie in (0, 1)");
  if (!(ladder_base > 1.0)) fail(Err::ConfigInvalid, "ladder base must exceed 1");
  if (ladder_depth < 6) fail(Err::ConfigInvalid, "ladder depth must be >= 6");
  if (angular < 64) fail(Err::ConfigInvalid, "angular resolution must be >= 64");
  if (scan < 16) fail(Err::ConfigInvalid, "scan resolution must be >= 16");
  if (glue < 8 || closing < 8) fail(Err::ConfigInvalid, "glue/closing resolution too low");
  if (!(distortion_bound >= 1.0)) fail(Err::ConfigInvalid, "distortion bound must be >= 1");
  if (!(uniformity_bound >= 1.0)) fail(Err::ConfigInvalid, "uniformity bound must be >= 1");
  if (crossing_cap < 3 || crossing_cap > 30)
    fail(Err::ConfigInvalid, "crossing cap must lie in [3, 30]");
}

std::string RunConfig::to_json() const {
  ordered_json j;
  j["schema"] = schema;
  j["knot"] = knot;
  j["beta"] = beta;
  j["eta"] = eta;
  j["ladder"] = {{"base", ladder_base}, {"depth", ladder_depth}};
  j["resolutions"] = {{"angular", angular}, {"scan", scan}, {"glue", glue},
                      {"closing", closing}};
  j["thresholds"] = {{"distortion", distortion_bound},
                     {"uniformity", uniformity_bound},
                     {"transversality_deg", transversality_deg},
                     {"genericity_deg", genericity_deg},
                     {"knn", knn},
                     {"crossing_cap", crossing_cap},
                     {"tord_rel_tol", tord_rel_tol},
                     {"tord_r2", tord_r2}};
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

namespace {

void check_keys(const ordered_json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail(Err::ConfigInvalid, "unknown key '" + it.key() + "' in " + where);
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    fail(Err::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"schema", "knot", "beta", "eta", "ladder", "resolutions", "thresholds",
                 "seed"},
             "config");
  RunConfig c;
  c.schema = j.value("schema", 1);
  c.knot = j.value("knot", c.knot);
  c.beta = j.value("beta", c.beta);
  c.eta = j.value("eta", c.eta);
  if (j.contains("ladder")) {
    check_keys(j["ladder"], {"base", "depth"}, "ladder");
    c.ladder_base = j["ladder"].value("base", c.ladder_base);
    c.ladder_depth = j["ladder"].value("depth", c.ladder_depth);
  }
  if (j.contains("resolutions")) {
    check_keys(j["resolutions"], {"angular", "scan", "glue", "closing"}, "resolutions");
    c.angular = j["resolutions"].value("angular", c.angular);
    c.scan = j["resolutions"].value("scan", c.scan);
    c.glue = j["resolutions"].value("glue", c.glue);
    c.closing = j["resolutions"].value("closing", c.closing);
  }
  if (j.contains("thresholds")) {
    check_keys(j["thresholds"],
               {"distortion", "uniformity", "transversality_deg", "genericity_deg", "knn",
                "crossing_cap", "tord_rel_tol", "tord_r2"},
               "thresholds");
    const auto& t = j["thresholds"];
    c.distortion_bound = t.value("distortion", c.distortion_bound);
    c.uniformity_bound = t.value("uniformity", c.uniformity_bound);
    c.transversality_deg = t.value("transversality_deg", c.transversality_deg);
    c.genericity_deg = t.value("genericity_deg", c.genericity_deg);
    c.knn = t.value("knn", c.knn);
    c.crossing_cap = t.value("crossing_cap", c.crossing_cap);
    c.tord_rel_tol = t.value("tord_rel_tol", c.tord_rel_tol);
    c.tord_r2 = t.value("tord_r2", c.tord_r2);
  }
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::ConfigInvalid, "cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace mkf
