#include "mkf/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mkf/errors.hpp"
#include "mkf/projection.hpp"

namespace mkf {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

LaurentPoly preset_jones(const std::string& name) {
  LaurentPoly p;
  p.var = "t";
  if (name == "unknot") {
    p.coeff = {{0, 1}};
  } else if (name == "torus-2-3") {
    p.coeff = {{-4, -1}, {-3, 1}, {-1, 1}};
  } else if (name == "figure-eight") {
    p.coeff = {{-2, 1}, {-1, -1}, {0, 1}, {1, -1}, {2, 1}};
  } else {
    fail(Err::ConfigInvalid, "no reference invariant for preset '" + name + "'");
  }
  return p;
}

namespace {

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp);
    if (!f) fail(Err::IoError, "cannot open " + tmp.string());
    f << content;
  }
  fs::rename(tmp, path);
}

void atomic_write_surface(const fs::path& path, const SampledSurface& s) {
  std::ostringstream os;
  write_surface_csv(s, os);
  atomic_write(path, os.str());
}

ordered_json vec_json(const Vec4& v) { return ordered_json::array({v[0], v[1], v[2], v[3]}); }

Vec4 vec_from_json(const ordered_json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
          j.at(3).get<double>()};
}

BuildOptions build_options(const RunConfig& cfg) {
  BuildOptions opts;
  opts.eta = cfg.eta;
  opts.scan_resolution = cfg.scan;
  opts.distortion_bound = cfg.distortion_bound;
  opts.glue_resolution = cfg.glue;
  opts.closing_resolution = cfg.closing;
  opts.simplicity.min_angle_deg = cfg.transversality_deg;
  return opts;
}

GraphOptions graph_options(const RunConfig& cfg) {
  GraphOptions g;
  g.knn = cfg.knn;
  return g;
}

ProjectOptions project_options(const RunConfig& cfg) {
  ProjectOptions p;
  p.min_angle_deg = cfg.genericity_deg;
  return p;
}

}  // namespace

std::string cmd_build(const RunConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  AxisLine axis(basis4(0));
  KnotOptions kopts;
  kopts.m = cfg.angular;
  kopts.eta = cfg.eta;
  KnotCurve knot = make_preset_knot(cfg.knot, axis, kopts);
  std::vector<double> ladder = cfg.ladder();

  SampledSurface horn = hornify(knot, axis, cfg.beta, ladder, cfg.eta);
  SampledSurface cone = hornify(knot, axis, 1.0, ladder, cfg.eta);
  cone.name = "knot_cone";
  UniversalTriangle ut = build_universal_triangle(knot, axis, cfg.beta, ladder,
                                                  build_options(cfg));

  fs::create_directories(fs::path(out_dir) / "surfaces");
  fs::create_directories(fs::path(out_dir) / "reports");
  atomic_write(fs::path(out_dir) / "config.json", cfg.to_json());

  atomic_write_surface(fs::path(out_dir) / "surfaces" / "hornification.csv", horn);
  atomic_write_surface(fs::path(out_dir) / "surfaces" / "knot_cone.csv", cone);
  atomic_write_surface(fs::path(out_dir) / "surfaces" / "body.csv", ut.body);
  atomic_write_surface(fs::path(out_dir) / "surfaces" / "glue1.csv", ut.glue1);
  atomic_write_surface(fs::path(out_dir) / "surfaces" / "glue2.csv", ut.glue2);
  atomic_write_surface(fs::path(out_dir) / "surfaces" / "closing.csv", ut.closing);

  SampledSurface knot_surface;
  knot_surface.name = "knot";
  knot_surface.ladder = {1.0};
  knot_surface.n_theta = knot.m;
  knot_surface.theta_wraps = true;
  knot_surface.pts = knot.samples;
  knot_surface.theta_tags.assign(static_cast<std::size_t>(knot.m), "");
  atomic_write_surface(fs::path(out_dir) / "surfaces" / "knot.csv", knot_surface);

  ordered_json man;
  man["schema"] = 1;
  man["config"] = ordered_json::parse(cfg.to_json());
  ordered_json derived;
  derived["knot_scale"] = knot.scale;
  derived["knot_trivial"] = knot.trivial;
  derived["min_self_distance"] = knot.min_self_distance;
  derived["tube_angle"] = ut.tube_angle;
  derived["theta1"] = ut.theta1;
  derived["theta2"] = ut.theta2;
  derived["j1"] = ut.j1;
  derived["j2"] = ut.j2;
  derived["x1"] = ut.x1;
  derived["x2"] = ut.x2;
  derived["body_length_unit"] = ut.body_length_unit;
  derived["tau_angle1_deg"] = ut.tau_angle1_deg;
  derived["tau_angle2_deg"] = ut.tau_angle2_deg;
  derived["axis"] = vec_json(ut.axis_dir);
  derived["v1"] = vec_json(ut.v1);
  derived["v2"] = vec_json(ut.v2);
  derived["pair_built"] = cfg.beta > 1.0;
  derived["projection_seeds"] =
      ordered_json::array({cfg.seed, cfg.seed + 1, cfg.seed + 2});
  man["derived"] = derived;
  ordered_json surfaces;
  ordered_json ladder_json = ordered_json::array();
  for (double t : ladder) ladder_json.push_back(t);
  surfaces["ladder"] = ladder_json;
  auto surf_meta = [&](const SampledSurface& s, const std::string& file) {
    return ordered_json{{"file", file}, {"n_theta", s.n_theta}, {"wraps", s.theta_wraps}};
  };
  surfaces["hornification"] = surf_meta(horn, "surfaces/hornification.csv");
  surfaces["knot_cone"] = surf_meta(cone, "surfaces/knot_cone.csv");
  surfaces["body"] = surf_meta(ut.body, "surfaces/body.csv");
  surfaces["glue1"] = surf_meta(ut.glue1, "surfaces/glue1.csv");
  surfaces["glue2"] = surf_meta(ut.glue2, "surfaces/glue2.csv");
  surfaces["closing"] = surf_meta(ut.closing, "surfaces/closing.csv");
  man["surfaces"] = surfaces;
  atomic_write(fs::path(out_dir) / "manifest.json", man.dump(2) + "\n");
  return out_dir;
}

RunArtifacts load_run(const std::string& run_dir) {
  fs::path man_path = fs::path(run_dir) / "manifest.json";
  if (!fs::exists(man_path)) fail(Err::MissingArtifact, "no manifest at " + man_path.string());
  std::ifstream f(man_path);
  ordered_json man = ordered_json::parse(f);

  RunArtifacts run;
  run.dir = run_dir;
  run.config = parse_config(man.at("config").dump());
  const ordered_json& derived = man.at("derived");

  AxisLine axis(basis4(0));
  KnotOptions kopts;
  kopts.m = run.config.angular;
  kopts.eta = run.config.eta;
  kopts.scale = derived.at("knot_scale").get<double>();
  run.knot = make_preset_knot(run.config.knot, axis, kopts);

  const ordered_json& surfaces = man.at("surfaces");
  run.ladder.clear();
  for (const auto& t : surfaces.at("ladder")) run.ladder.push_back(t.get<double>());

  auto load_surface = [&](const std::string& key, std::vector<double> ladder) {
    const ordered_json& meta = surfaces.at(key);
    fs::path file = fs::path(run_dir) / meta.at("file").get<std::string>();
    if (!fs::exists(file)) fail(Err::MissingArtifact, "missing " + file.string());
    return read_surface_csv(file.string(), key, std::move(ladder),
                            meta.at("wraps").get<bool>());
  };
  run.hornification = load_surface("hornification", run.ladder);
  run.cone = load_surface("knot_cone", run.ladder);
  run.ut.beta = run.config.beta;
  run.ut.knot_name = run.config.knot;
  run.ut.theta1 = derived.at("theta1").get<double>();
  run.ut.theta2 = derived.at("theta2").get<double>();
  run.ut.j1 = derived.at("j1").get<int>();
  run.ut.j2 = derived.at("j2").get<int>();
  run.ut.x1 = derived.at("x1").get<double>();
  run.ut.x2 = derived.at("x2").get<double>();
  run.ut.tube_angle = derived.at("tube_angle").get<double>();
  run.ut.body_length_unit = derived.at("body_length_unit").get<double>();
  run.ut.axis_dir = vec_from_json(derived.at("axis"));
  run.ut.v1 = vec_from_json(derived.at("v1"));
  run.ut.v2 = vec_from_json(derived.at("v2"));
  run.ut.body = load_surface("body", run.ladder);
  run.ut.glue1 = load_surface("glue1", run.ladder);
  run.ut.glue2 = load_surface("glue2", run.ladder);
  run.ut.closing = load_surface("closing", run.ladder);
  for (const auto& s : derived.at("projection_seeds"))
    run.projection_seeds.push_back(s.get<std::uint64_t>());
  return run;
}

void VerifyReport::add(std::string name, bool ok, std::string detail) {
  checks.push_back({std::move(name), ok, std::move(detail)});
  pass = pass && ok;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void write_lne_csv(const fs::path& path, const LneReport& rep, double pitch) {
  std::ostringstream os;
  os << "t_k,C_k,pitch,pairs_checked\n";
  for (const ScaleLne& row : rep.per_scale) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d\n", row.t, row.c, pitch,
                  row.pairs_checked);
    os << buf;
  }
  atomic_write(path, os.str());
}

void check_lne(VerifyReport& rep, const std::string& label, const MetricGraph& g,
               double bound, const fs::path& reports) {
  LneReport lne = lne_verdict(g, bound);
  write_lne_csv(reports / ("lne_" + label + ".csv"), lne, g.pitch);
  rep.add("lne." + label,
          lne.lne_consistent,
          "uniformity " + fmt(lne.uniformity) + " vs bound " + fmt(bound) + ", C_sup " +
              fmt(lne.c_sup));
}

LaurentPoly scale_jones(const LinkCurve& link, std::uint64_t seed, const RunConfig& cfg) {
  KnotDiagram d = project_to_diagram(link, seed, project_options(cfg));
  d = simplify_diagram(d);
  return jones_polynomial(d, cfg.crossing_cap);
}

struct TordRow {
  std::string pair;
  std::string metric;
  double t, dist;
};

void write_tord_csv(const fs::path& path, const std::vector<TordRow>& rows) {
  std::ostringstream os;
  os << "pair,metric,t,distance,log_t,log_distance\n";
  for (const TordRow& r : rows) {
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%.17g\n", r.pair.c_str(),
                  r.metric.c_str(), r.t, r.dist, std::log(r.t), std::log(r.dist));
    os << buf;
  }
  atomic_write(path, os.str());
}

}  // namespace

VerifyReport cmd_verify(const std::string& run_dir, const std::string& suite, bool quiet) {
  if (suite != "lne" && suite != "tord" && suite != "cone" && suite != "knot" &&
      suite != "all")
    fail(Err::ConfigInvalid, "unknown suite '" + suite + "'");
  RunArtifacts run = load_run(run_dir);
  const RunConfig& cfg = run.config;
  fs::path reports = fs::path(run_dir) / "reports";
  fs::create_directories(reports);

  VerifyReport rep;
  rep.suite = suite;
  bool all = suite == "all";

  if (all || suite == "lne") {
    GraphOptions go = graph_options(cfg);
    check_lne(rep, "hornification", build_metric_graph(run.hornification, go),
              cfg.uniformity_bound, reports);
    check_lne(rep, "microknot_surface", build_metric_graph(run.ut.closed_set(), go),
              cfg.uniformity_bound, reports);
    check_lne(rep, "knot_cone", build_metric_graph(run.cone, go), cfg.uniformity_bound,
              reports);
  }

  if (all || suite == "tord") {
    const int m = run.hornification.n_theta;
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < 12; ++p) {
      int ja = (p * 37) % m;
      int jb = (ja + m / 3 + p * 11) % m;
      if (ja != jb) pairs.emplace_back(ja, jb);
    }
    MetricGraph g = build_metric_graph(run.hornification, graph_options(cfg));
    bool tord_ok = true, hier_ok = true;
    double worst_rel = 0.0, worst_r2 = 1.0;
    std::vector<TordRow> rows;
    for (auto [ja, jb] : pairs) {
      TordEstimate outer = estimate_tord(run.hornification.arc(ja),
                                         run.hornification.arc(jb));
      TordEstimate inner = estimate_tord_inner(g, 0, ja, 0, jb);
      for (std::size_t i = 0; i < outer.fit_t.size(); ++i)
        rows.push_back({std::to_string(ja) + "-" + std::to_string(jb), "outer",
                        outer.fit_t[i], outer.fit_d[i]});
      for (std::size_t i = 0; i < inner.fit_t.size(); ++i)
        rows.push_back({std::to_string(ja) + "-" + std::to_string(jb), "inner",
                        inner.fit_t[i], inner.fit_d[i]});
      double rel = std::fabs(outer.exponent - cfg.beta) / cfg.beta;
      worst_rel = std::max(worst_rel, rel);
      worst_r2 = std::min(worst_r2, outer.r_squared);
      if (rel > cfg.tord_rel_tol || outer.r_squared < cfg.tord_r2) tord_ok = false;
      if (!(inner.exponent <= outer.exponent + 0.05) || inner.exponent < 0.95 ||
          outer.exponent < 0.95)
        hier_ok = false;
    }
    write_tord_csv(reports / "tord_fits.csv", rows);
    rep.add("tord.orbit_exponent", tord_ok,
            "worst |slope-beta|/beta " + fmt(worst_rel) + ", worst r2 " + fmt(worst_r2));
    rep.add("tord.hierarchy", hier_ok, "inner <= outer + 0.05 and both >= 0.95");
  }

  if (all || suite == "cone") {
    std::vector<Vec4> axis_pt{run.ut.axis_dir};
    if (cfg.beta > 1.0) {
      ConeReport horn_cone = estimate_tangent_cone(run.hornification, axis_pt);
      bool mono = true;
      for (std::size_t i = 1; i < horn_cone.to_candidate.size(); ++i)
        if (horn_cone.to_candidate[i] > horn_cone.to_candidate[i - 1] + 1e-12) mono = false;
      rep.add("cone.hornification_collapse", mono && horn_cone.converged,
              "final rescaled-link distance to the axis point " +
                  fmt(horn_cone.to_candidate.empty() ? -1.0 : horn_cone.to_candidate.back()) +
                  " vs 3*pitch " + fmt(3.0 * horn_cone.pitch));
    }
    ConeReport cone_rep = estimate_tangent_cone(run.cone);
    bool cone_stable = true;
    for (double dgap : cone_rep.consecutive)
      if (dgap > cone_rep.pitch) cone_stable = false;
    rep.add("cone.knot_cone_self_limit", cone_stable,
            "max consecutive rescaled-link distance " +
                fmt(cone_rep.consecutive.empty()
                        ? 0.0
                        : *std::max_element(cone_rep.consecutive.begin(),
                                            cone_rep.consecutive.end())) +
                " vs pitch " + fmt(cone_rep.pitch));
    if (cfg.beta > 1.0) {
      LinkCurve y_tangent = run.ut.tangent_link();
      ConeReport y_cone = estimate_tangent_cone(run.ut.closed_set(), y_tangent.pts);
      rep.add("cone.microknot_limit_triangle", y_cone.converged,
              "final distance to the flat triangle " +
                  fmt(y_cone.to_candidate.empty() ? -1.0 : y_cone.to_candidate.back()));

      LaurentPoly jy = scale_jones(y_tangent, run.projection_seeds.front(), cfg);
      LinkCurve cone_link = extract_link(run.cone, 0);
      LaurentPoly jc = scale_jones(cone_link, run.projection_seeds.front(), cfg);
      LaurentPoly ref = preset_jones(cfg.knot);
      bool jy_ok = jy == laurent_one("t");
      bool jc_ok = jc == ref || jc == ref.mirrored();
      rep.add("cone.tangent_link_invariants", jy_ok && jc_ok,
              "triangle link " + jy.to_string() + "; cone link " + jc.to_string());
      DistinctVerdict verdict = certify_distinct_jones(jy, jc);
      bool expect_distinct = !run.knot.trivial;
      rep.add("cone.tangent_links_" + std::string(expect_distinct ? "distinct" : "agree"),
              (verdict == DistinctVerdict::Distinct) == expect_distinct,
              expect_distinct ? "non-trivial knot must be distinguished from the flat cone"
                              : "trivial knot matches the flat cone");
    } else {
      // exponent 1: the surface is its own tangent cone, nothing collapses
      ConeReport y_cone = estimate_tangent_cone(run.ut.closed_set());
      bool stable = true;
      for (double dgap : y_cone.consecutive)
        if (dgap > y_cone.pitch) stable = false;
      rep.add("cone.microknot_self_limit", stable,
              "exponent 1 surface: rescaled links stay within pitch of each other");
    }
  }

  if (all || suite == "knot") {
    LaurentPoly ref = preset_jones(cfg.knot);
    bool horn_ok = true, union_ok = true;
    LaurentPoly first;
    bool have_first = false;
    std::string detail;
    for (std::uint64_t seed : run.projection_seeds) {
      for (int k = 0; k < static_cast<int>(run.ladder.size()); ++k) {
        LaurentPoly jh = scale_jones(extract_link(run.hornification, k), seed, cfg);
        if (!(jh == ref || jh == ref.mirrored())) horn_ok = false;
        if (!have_first) {
          first = jh;
          have_first = true;
        } else if (!(jh == first)) {
          horn_ok = false;  // chirality must not flip between scales
        }
        LaurentPoly ju = scale_jones(run.ut.union_link(k), seed, cfg);
        if (!(ju == first)) union_ok = false;
      }
    }
    rep.add("knot.hornification_links", horn_ok,
            "links at every scale and seed carry " +
                (have_first ? first.to_string() : std::string("<none>")));
    rep.add("knot.microknot_closure_links", union_ok,
            "closed triangle-plus-cone links carry the same invariant");
  }

  ordered_json out;
  out["suite"] = suite;
  ordered_json checks = ordered_json::array();
  for (const CheckResult& c : rep.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  out["checks"] = checks;
  out["pass"] = rep.pass;
  atomic_write(reports / ("verify_" + suite + ".json"), out.dump(2) + "\n");

  if (!quiet) {
    for (const CheckResult& c : rep.checks)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
    std::cout << (rep.pass ? "OK" : "FAILED") << ": suite " << suite << "\n";
  }
  return rep;
}

void cmd_export(const std::string& run_dir, const std::string& format, int drop_coord) {
  RunArtifacts run = load_run(run_dir);
  fs::path exports = fs::path(run_dir) / "exports";
  fs::create_directories(exports);
  std::vector<const SampledSurface*> all = {&run.hornification, &run.cone,   &run.ut.body,
                                            &run.ut.glue1,      &run.ut.glue2, &run.ut.closing};
  if (format == "csv") {
    for (const SampledSurface* s : all) {
      std::ostringstream os;
      write_surface_csv(*s, os);
      atomic_write(exports / (s->name + ".csv"), os.str());
    }
  } else if (format == "obj" || format == "ply") {
    for (const SampledSurface* s : all) {
      std::ostringstream os;
      if (format == "obj")
        write_obj(*s, os, drop_coord);
      else
        write_ply(*s, os, drop_coord);
      atomic_write(exports / (s->name + "." + format), os.str());
    }
  } else if (format == "pd") {
    auto emit = [&](const LinkCurve& link, const std::string& name) {
      KnotDiagram d = project_to_diagram(link, run.projection_seeds.front(),
                                         project_options(run.config));
      d = simplify_diagram(d);
      std::ostringstream os;
      write_pd(d, os);
      atomic_write(exports / (name + ".pd"), os.str());
    };
    emit(extract_link(run.hornification, 0), "hornification_link");
    emit(run.ut.union_link(0), "microknot_link");
  } else {
    fail(Err::UnknownFormat, "format must be csv, obj, ply or pd");
  }
}


int cli_exit_code(const Error& e) {
  switch (e.code()) {
    case Err::ConfigInvalid: return 2;
    case Err::MissingArtifact: return 5;
    case Err::UnknownFormat: return 6;
    case Err::IoError: return 7;
    default: return 3;
  }
}

}  // namespace mkf

