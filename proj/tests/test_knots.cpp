#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mkf/knot.hpp"
#include "test_util.hpp"

using namespace mkf;

namespace {
const AxisLine kAxis{basis4(0)};
}

TEST_CASE("presets are closed, embedded and inside the tube at every resolution") {
  for (const char* kind : {"unknot", "torus-2-3", "figure-eight"}) {
    for (int m : {64, 128, 256, 512}) {
      KnotOptions opts;
      opts.m = m;
      KnotCurve k = make_preset_knot(kind, kAxis, opts);
      CHECK(k.m == m);
      CHECK(static_cast<int>(k.samples.size()) == m);
      CHECK(distance(k.delta(0.0), k.delta(2.0 * M_PI)) <= 1e-9);
      CHECK(k.min_self_distance > 0.0);
      double max_rho = 0.0;
      for (const Vec4& x : k.samples) {
        CHECK(std::fabs(norm(x) - 1.0) <= 1e-9);
        max_rho = std::max(max_rho, distance(x, kAxis.dir));
      }
      CHECK(max_rho < opts.eta);
    }
  }
}

TEST_CASE("unknot self distance equals its diameter") {
  KnotCurve k = make_preset_knot("unknot", kAxis, {});
  double diameter = 0.0;
  for (int i = 0; i < k.m; ++i)
    for (int j = i + 1; j < k.m; ++j)
      diameter = std::max(diameter, distance(k.sample(i), k.sample(j)));
  CHECK(k.min_self_distance == doctest::Approx(diameter).epsilon(0.01));
}

TEST_CASE("torus knot validation oracle recheck") {
  KnotOptions opts;
  opts.m = 512;
  KnotCurve k = make_preset_knot("torus-2-3", kAxis, opts);
  CHECK_FALSE(k.trivial);
  // brute-force re-check of the embeddedness margin: closest non-adjacent
  // approach well above the sampling pitch
  double pitch = 0.0;
  for (int j = 0; j < k.m; ++j)
    pitch = std::max(pitch, distance(k.sample(j), k.sample((j + 1) % k.m)));
  CHECK(k.min_self_distance > 10.0 * pitch);
}

TEST_CASE("explicit overlarge scale violates the tube") {
  KnotOptions opts;
  opts.scale = 0.5;
  CHECK_THROWS_AS(make_preset_knot("torus-2-3", kAxis, opts), Error);
}

TEST_CASE("coprimality is enforced for torus presets") {
  CHECK_THROWS_AS(make_preset_knot("torus-2-4", kAxis, {}), Error);
}

TEST_CASE("sphere chart round trip") {
  SphereChart chart(normalized(Vec4{1, 1, 0, 0}));
  std::array<double, 3> u{0.2, -0.1, 0.33};
  Vec4 x = chart.to_sphere(u);
  CHECK(std::fabs(norm(x) - 1.0) <= 1e-12);
  std::array<double, 3> back = chart.from_sphere(x);
  for (int i = 0; i < 3; ++i)
    CHECK(back[static_cast<std::size_t>(i)] ==
          doctest::Approx(u[static_cast<std::size_t>(i)]).epsilon(1e-12));
  CHECK(distance(chart.to_sphere({0, 0, 0}), chart.pole) <= 1e-15);
}

TEST_CASE("user-supplied sample lists validate like presets") {
  KnotCurve preset = make_preset_knot("torus-2-3", kAxis, {});
  KnotCurve wrapped = make_knot_from_samples("custom", preset.samples);
  CHECK(wrapped.m == preset.m);
  CHECK(wrapped.min_self_distance ==
        doctest::Approx(preset.min_self_distance).epsilon(1e-12));
  // the interpolated parametrization passes through the samples
  for (int j = 0; j < wrapped.m; j += 37)
    CHECK(distance(wrapped.delta(wrapped.param(j)), preset.sample(j)) <= 1e-9);

  std::vector<Vec4> off_sphere = preset.samples;
  off_sphere[3] = 1.01 * off_sphere[3];
  CHECK_THROWS_AS(make_knot_from_samples("bad", off_sphere), Error);
}

TEST_CASE("charts at different poles agree on orientation") {
  SphereChart a(basis4(0));
  SphereChart b(normalized(Vec4{0.3, -1.0, 0.2, 0.7}));
  // transporting a curve from one chart to the other is an isometry-free
  // reembedding; consistent orientation means no mirroring
  std::array<double, 3> u{0.21, -0.05, 0.4};
  Vec4 xa = a.to_sphere(u);
  std::array<double, 3> back = a.from_sphere(xa);
  for (int i = 0; i < 3; ++i)
    CHECK(back[static_cast<std::size_t>(i)] ==
          doctest::Approx(u[static_cast<std::size_t>(i)]).epsilon(1e-12));
  Vec4 xb = b.to_sphere(u);
  CHECK(std::fabs(norm(xb) - 1.0) <= 1e-12);
}

TEST_CASE("geodesics") {
  SUBCASE("quarter circle between basis vectors") {
    SphericalGeodesic g = geodesic_between(basis4(0), basis4(1));
    CHECK(g.length() == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    Vec4 mid = g.point_at_fraction(0.5);
    Vec4 expected = normalized(basis4(0) + basis4(1));
    CHECK(distance(mid, expected) <= 1e-12);
  }

  SUBCASE("short arcs approach the chord length") {
    Vec4 a = basis4(0);
    Vec4 b = normalized(a + Vec4{0, 1e-4, 0, 0});
    SphericalGeodesic g = geodesic_between(a, b);
    CHECK(g.length() == doctest::Approx(distance(a, b)).epsilon(1e-6));
  }

  SUBCASE("equal or antipodal endpoints are rejected") {
    CHECK_THROWS_AS(geodesic_between(basis4(0), basis4(0)), Error);
    CHECK_THROWS_AS(geodesic_between(basis4(0), -basis4(0)), Error);
  }
}

TEST_CASE("simple arcs") {
  AxisTube tube(2.0, 0.2);

  SUBCASE("the centered unknot is simple everywhere") {
    KnotCurve k = make_preset_knot("unknot", kAxis, {});
    for (double theta : {0.3, 1.7, 4.0}) {
      SimplicityReport rep = is_simple(theta, k, kAxis, tube);
      CHECK(rep.simple);
      CHECK(rep.transversal);
      CHECK(rep.crossings_after == 2);
      CHECK(rep.k_index >= 0);
    }
  }

  SUBCASE("a constructed radial tangency is flagged") {
    // curve whose azimuth has a critical point at u = 0: there the tangent
    // lies inside the orbit plane, so the geodesic meets it at angle ~ 0
    KnotCurve k;
    k.name = "tangency";
    k.m = 512;
    k.delta = [](double u) {
      double a = 0.15 + 0.03 * std::sin(u);
      double psi = 0.25 * std::cos(u);
      return Vec4{std::cos(a), std::sin(a) * std::cos(psi), std::sin(a) * std::sin(psi), 0.0};
    };
    for (int j = 0; j < k.m; ++j) k.samples.push_back(k.delta(2.0 * M_PI * j / k.m));
    SimplicityReport rep = is_simple(0.0, k, kAxis, tube);
    CHECK_FALSE(rep.transversal);
    CHECK_FALSE(rep.simple);
  }

  SUBCASE("scan over 360 thetas finds a nonempty simple set for the trefoil") {
    KnotCurve k = make_preset_knot("torus-2-3", kAxis, {});
    int simple_count = 0;
    std::vector<double> simple_thetas;
    for (int i = 0; i < 360; ++i) {
      double theta = 2.0 * M_PI * i / 360;
      SimplicityReport rep = is_simple(theta, k, kAxis, tube);
      if (rep.simple) {
        ++simple_count;
        if (simple_thetas.size() < 4) simple_thetas.push_back(theta);
      }
    }
    CHECK(simple_count > 0);

    SUBCASE("simple thetas stay simple under sample refinement") {
      KnotOptions fine;
      fine.m = 1024;
      fine.scale = k.scale;
      KnotCurve k2 = make_preset_knot("torus-2-3", kAxis, fine);
      for (double theta : simple_thetas) {
        SimplicityReport rep = is_simple(theta, k2, kAxis, tube);
        CHECK(rep.simple);
      }
    }
  }
}
