#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mkf/runner.hpp"

using namespace mkf;
namespace fs = std::filesystem;

namespace {

std::string small_config(const std::string& knot, double beta) {
  std::ostringstream os;
  os << R"({"schema": 1, "knot": ")" << knot << R"(", "beta": )" << beta
     << R"(, "ladder": {"depth": 8},)"
     << R"( "resolutions": {"angular": 256, "scan": 360, "glue": 32, "closing": 32},)"
     << R"( "seed": 9})";
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("mkf_test_" + tag + "_" +
                                          std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing and validation") {
  RunConfig c = parse_config(small_config("unknot", 2.0));
  CHECK(c.knot == "unknot");
  CHECK(c.beta == 2.0);
  CHECK(c.ladder_depth == 8);
  CHECK(c.angular == 256);
  CHECK(c.seed == 9);

  SUBCASE("defaults survive the echo round trip") {
    RunConfig back = parse_config(c.to_json());
    CHECK(back.to_json() == c.to_json());
  }

  SUBCASE("invalid exponent is rejected") {
    CHECK_THROWS_AS(parse_config(small_config("unknot", 0.5)), Error);
    try {
      parse_config(small_config("unknot", 0.5));
    } catch (const Error& e) {
      CHECK(cli_exit_code(e) == 2);
    }
  }

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"schema":1, "knots": "unknot"})"), Error);
  }

  SUBCASE("exit codes are distinct per failure class") {
    CHECK(cli_exit_code(Error(Err::ConfigInvalid, "")) == 2);
    CHECK(cli_exit_code(Error(Err::MissingArtifact, "")) == 5);
    CHECK(cli_exit_code(Error(Err::UnknownFormat, "")) == 6);
    CHECK(cli_exit_code(Error(Err::IoError, "")) == 7);
    CHECK(cli_exit_code(Error(Err::TubeViolation, "")) == 3);
  }
}

TEST_CASE("build writes a complete, deterministic run directory") {
  TempDir tmp("build");
  RunConfig cfg = parse_config(small_config("torus-2-3", 2.0));
  std::string run_a = cmd_build(cfg, (tmp.path / "a").string());
  std::string run_b = cmd_build(cfg, (tmp.path / "b").string());

  for (const char* f :
       {"manifest.json", "config.json", "surfaces/hornification.csv",
        "surfaces/knot_cone.csv", "surfaces/body.csv", "surfaces/glue1.csv",
        "surfaces/glue2.csv", "surfaces/closing.csv", "surfaces/knot.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(fs::path(run_a) / f));
    CHECK(slurp(fs::path(run_a) / f) == slurp(fs::path(run_b) / f));
  }

  SUBCASE("the manifest records a nonempty simple window") {
    RunArtifacts run = load_run(run_a);
    CHECK(run.ut.theta1 < run.ut.theta2);
    CHECK(run.ut.x1 > run.ut.tube_angle);
    CHECK(run.hornification.n_theta == 256);
    bool distinct_artifacts = !(run.hornification.pts == run.ut.body.pts);
    CHECK(distinct_artifacts);
    CHECK(run.ladder.size() == 9);
  }

  SUBCASE("loading reproduces the built surfaces exactly") {
    RunArtifacts run = load_run(run_a);
    AxisLine axis(basis4(0));
    KnotOptions kopts;
    kopts.m = cfg.angular;
    kopts.eta = cfg.eta;
    kopts.scale = run.knot.scale;
    KnotCurve knot = make_preset_knot(cfg.knot, axis, kopts);
    SampledSurface horn = hornify(knot, axis, cfg.beta, run.ladder, cfg.eta);
    CHECK(horn.pts == run.hornification.pts);
  }

  SUBCASE("verify all passes on the small trefoil run") {
    VerifyReport rep = cmd_verify(run_a, "all", /*quiet=*/true);
    for (const CheckResult& c : rep.checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.pass);
    }
    CHECK(rep.pass);
    CHECK(fs::exists(fs::path(run_a) / "reports" / "verify_all.json"));
    CHECK(fs::exists(fs::path(run_a) / "reports" / "lne_hornification.csv"));
    CHECK(fs::exists(fs::path(run_a) / "reports" / "tord_fits.csv"));
  }

  SUBCASE("verify reports are deterministic across identical runs") {
    cmd_verify(run_a, "knot", true);
    cmd_verify(run_b, "knot", true);
    CHECK(slurp(fs::path(run_a) / "reports" / "verify_knot.json") ==
          slurp(fs::path(run_b) / "reports" / "verify_knot.json"));
  }

  SUBCASE("unknown suite is rejected") {
    CHECK_THROWS_AS(cmd_verify(run_a, "nonsense", true), Error);
  }

  SUBCASE("an exponent-1 run verifies through its own suite variants") {
    RunConfig flat = parse_config(small_config("unknot", 1.0));
    std::string run = cmd_build(flat, (tmp.path / "flat").string());
    VerifyReport rep = cmd_verify(run, "cone", true);
    for (const CheckResult& c : rep.checks) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
    CHECK(rep.pass);
  }

  SUBCASE("verify on a missing directory reports the artifact") {
    try {
      cmd_verify((tmp.path / "nowhere").string(), "lne", true);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(cli_exit_code(e) == 5);
    }
  }
}

TEST_CASE("exports") {
  TempDir tmp("export");
  RunConfig cfg = parse_config(small_config("unknot", 2.0));
  std::string run = cmd_build(cfg, (tmp.path / "run").string());

  SUBCASE("csv export is idempotent byte for byte") {
    cmd_export(run, "csv");
    std::string first = slurp(fs::path(run) / "exports" / "hornification.csv");
    cmd_export(run, "csv");
    CHECK(first == slurp(fs::path(run) / "exports" / "hornification.csv"));
    CHECK(first == slurp(fs::path(run) / "surfaces" / "hornification.csv"));
  }

  SUBCASE("obj vertex count equals the grid size") {
    cmd_export(run, "obj", 3);
    std::string obj = slurp(fs::path(run) / "exports" / "hornification.obj");
    std::size_t vcount = 0;
    std::istringstream is(obj);
    std::string line;
    while (std::getline(is, line))
      if (line.rfind("v ", 0) == 0) ++vcount;
    RunArtifacts arts = load_run(run);
    CHECK(vcount == static_cast<std::size_t>(arts.hornification.size()));
  }

  SUBCASE("ply export carries the header") {
    cmd_export(run, "ply", 0);
    CHECK(slurp(fs::path(run) / "exports" / "body.ply").rfind("ply\n", 0) == 0);
  }

  SUBCASE("pd export is a valid diagram file") {
    cmd_export(run, "pd");
    std::ifstream f(fs::path(run) / "exports" / "hornification_link.pd");
    KnotDiagram d = read_pd(f);
    CHECK(d.n() == 0);  // unknot reduces fully
  }

  SUBCASE("unknown format maps to its exit code") {
    try {
      cmd_export(run, "stl");
      CHECK(false);
    } catch (const Error& e) {
      CHECK(cli_exit_code(e) == 6);
    }
  }
}

TEST_CASE("command line binary smoke test") {
  fs::path exe;
  for (const char* cand : {"../tools/mkf", "build/tools/mkf", "tools/mkf"})
    if (fs::exists(cand)) {
      exe = cand;
      break;
    }
  if (exe.empty()) {
    MESSAGE("mkf binary not found next to the test dir; skipping");
    return;
  }
  TempDir tmp("cli");
  fs::path cfg_path = tmp.path / "cfg.json";
  std::ofstream(cfg_path) << small_config("unknot", 2.0);
  fs::path run = tmp.path / "run";

  std::string build_cmd = exe.string() + " build --config " + cfg_path.string() + " --out " +
                          run.string() + " > /dev/null 2>&1";
  CHECK(std::system(build_cmd.c_str()) == 0);
  CHECK(fs::exists(run / "manifest.json"));

  std::string verify_cmd =
      exe.string() + " verify --run " + run.string() + " --suite knot > /dev/null 2>&1";
  CHECK(std::system(verify_cmd.c_str()) == 0);

  std::ofstream(tmp.path / "bad.json") << small_config("unknot", 0.5);
  std::string bad_cmd = exe.string() + " build --config " + (tmp.path / "bad.json").string() +
                        " --out " + (tmp.path / "bad").string() + " > /dev/null 2>&1";
  int rc = std::system(bad_cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 2);
}
