#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mkf/hornification.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mkf;

namespace {

const AxisLine kAxis{basis4(0)};

KnotCurve preset(const char* kind, int m = 512) {
  KnotOptions opts;
  opts.m = m;
  return make_preset_knot(kind, kAxis, opts);
}

LaurentPoly link_jones(const LinkCurve& c, std::uint64_t seed = 1) {
  return jones_polynomial(simplify_diagram(project_to_diagram(c, seed)), 30);
}

}  // namespace

TEST_CASE("scaling action") {
  KnotCurve k = preset("torus-2-3", 128);

  SUBCASE("identity at scale one") {
    for (const Vec4& x : k.samples)
      CHECK(distance(theta_action(1.0, x, kAxis, 2.0), x) <= 1e-12);
  }

  SUBCASE("exponent one is the plain cone") {
    for (double t : {0.5, 0.125, 0.03125})
      for (int j = 0; j < k.m; j += 17)
        CHECK(distance(theta_action(t, k.sample(j), kAxis, 1.0), t * k.sample(j)) <=
              1e-12 * t);
  }

  SUBCASE("orbits stay in their fixed two-plane") {
    for (int j = 0; j < k.m; j += 31) {
      QuasiPolar q = quasi_polar_decompose(k.sample(j), kAxis);
      for (double t : {1.0, 0.25, 1.0 / 1024, 1.0 / 4096}) {
        Vec4 p = theta_action(t, k.sample(j), kAxis, 2.0);
        Vec4 res = p - dot(p, kAxis.dir) * kAxis.dir - dot(p, q.v) * q.v;
        CHECK(norm(res) <= 1e-8 * t);
      }
    }
  }

  SUBCASE("offsets past the diameter overflow") {
    CHECK_THROWS_AS(theta_action(1e6, k.sample(0), kAxis, 2.0), Error);
  }

  SUBCASE("orbit tangency order to the axis is the exponent") {
    // closed form: the chordal offset of the orbit is t^beta * rho exactly
    for (double beta : {1.5, 2.0, 3.0}) {
      OrbitArc orbit = orbit_arc(k, kAxis, beta, k.param(40));
      ArcSamples orbit_samples = sample_arc(orbit.arc, dyadic_ladder(12));
      ArcSamples axis;
      axis.ts = orbit_samples.ts;
      for (double t : axis.ts) axis.pts.push_back(kAxis.at(t));
      TordEstimate est = estimate_tord(orbit_samples, axis);
      CHECK(est.metric == TordMetric::Outer);
      CHECK(std::fabs(est.exponent - beta) <= 0.05 * beta);
      CHECK(est.r_squared >= 0.999);
      for (double t : axis.ts)  // arcs are parametrized by distance to 0
        CHECK(norm(orbit.arc.eval(t)) == doctest::Approx(t).epsilon(1e-12));
    }
  }
}

TEST_CASE("hornified surfaces") {
  std::vector<double> ladder = dyadic_ladder(12);

  SUBCASE("exponent one on the unknot is a circular cone") {
    KnotCurve k = preset("unknot", 128);
    SampledSurface s = hornify(k, kAxis, 1.0, ladder, 0.2);
    s.validate();
    for (int kk : {0, 6, 12}) {
      double t = s.ladder[static_cast<std::size_t>(kk)];
      double r0 = norm(reject(s.at(0, kk), kAxis.dir));
      for (int j = 0; j < s.n_theta; ++j)
        CHECK(norm(reject(s.at(j, kk), kAxis.dir)) == doctest::Approx(r0).epsilon(1e-9));
      CHECK(r0 / t == doctest::Approx(norm(reject(k.sample(0), kAxis.dir))).epsilon(1e-9));
    }
  }

  SUBCASE("grid points are the action applied to the knot samples") {
    KnotCurve k = preset("torus-2-3", 128);
    SampledSurface s = hornify(k, kAxis, 2.0, ladder, 0.2);
    CHECK(s.at(17, 5) == theta_action(ladder[5], k.sample(17), kAxis, 2.0));
    CHECK(s.theta_wraps);
  }

  SUBCASE("a knot outside the tube is rejected") {
    KnotCurve k = preset("torus-2-3", 128);
    CHECK_THROWS_AS(hornify(k, kAxis, 2.0, ladder, 0.01), Error);
  }

  SUBCASE("orbits through distinct angles stay disjoint") {
    KnotCurve k = preset("torus-2-3", 128);
    SampledSurface s = hornify(k, kAxis, 2.0, ladder, 0.2);
    for (int kk : {0, 6, 12}) {
      double min_gap = 1e300;
      for (int a = 0; a < s.n_theta; ++a)
        for (int b = a + 1; b < s.n_theta; ++b)
          min_gap = std::min(min_gap, distance(s.at(a, kk), s.at(b, kk)));
      CHECK(min_gap > 0.0);
    }
  }

  SUBCASE("rescaling the ladder matches the compatible pointwise rescale") {
    KnotCurve k = preset("torus-2-3", 128);
    double beta = 2.0;
    double factor = 0.375;
    std::vector<double> scaled;
    for (double t : ladder) scaled.push_back(factor * t);
    SampledSurface a = hornify(k, kAxis, beta, ladder, 0.2);
    SampledSurface b = hornify(k, kAxis, beta, scaled, 0.2);
    for (int kk = 0; kk < a.n_scales(); ++kk)
      for (int j = 0; j < a.n_theta; j += 13) {
        QuasiPolar q = quasi_polar_decompose(a.at(j, kk), kAxis);
        QuasiPolar r;
        r.t = factor * q.t;
        r.rho = std::pow(factor, beta) * q.rho;
        r.v = q.v;
        r.on_axis = q.on_axis;
        CHECK(distance(quasi_polar_reconstruct(r, kAxis), b.at(j, kk)) <= 1e-12);
      }
  }

  SUBCASE("per-scale constants of the hornification do not depend on the scale") {
    KnotCurve k = preset("torus-2-3", 256);
    SampledSurface s = hornify(k, kAxis, 2.0, dyadic_ladder(8), 0.2);
    MetricGraph g = build_metric_graph(s);
    double c0 = lne_constant_per_scale(g, 0);
    double c8 = lne_constant_per_scale(g, 8);
    CHECK(c8 / c0 <= 1.1);
    CHECK(c0 / c8 <= 1.1);
  }
}

TEST_CASE("sub-triangles") {
  KnotCurve k = preset("torus-2-3", 256);
  std::vector<double> ladder = dyadic_ladder(12);

  SUBCASE("restriction and tags") {
    SampledSurface x = hornify(k, kAxis, 2.0, ladder, 0.2);
    SampledSurface t = sub_triangle(x, 10, 30);
    CHECK(t.n_theta == 21);
    CHECK_FALSE(t.theta_wraps);
    CHECK(t.theta_tags.front() == "gamma_theta1");
    CHECK(t.theta_tags.back() == "gamma_theta2");
    CHECK(t.at(0, 3) == x.at(10, 3));
    CHECK(t.at(20, 3) == x.at(30, 3));
    CHECK_THROWS_AS(sub_triangle(x, 30, 10), Error);
    SampledSurface c = sub_triangle_complement(x, 10, 30);
    CHECK(c.n_theta == x.n_theta - 21 + 2);
    CHECK(c.at(0, 0) == x.at(30, 0));
  }

  SUBCASE("boundary orbit pairs meet at order beta") {
    for (double beta : {1.5, 2.0, 3.0}) {
      SampledSurface x = hornify(k, kAxis, beta, ladder, 0.2);
      TordEstimate est = estimate_tord(x.arc(10), x.arc(30));
      CHECK(std::fabs(est.exponent - beta) <= 0.05 * beta);
      CHECK(est.r_squared >= 0.999);
    }
  }

  SUBCASE("the complement is again a triangle of the same exponent") {
    double beta = 2.0;
    SampledSurface x = hornify(k, kAxis, beta, ladder, 0.2);
    SampledSurface body = sub_triangle_complement(x, 10, 30);
    TordEstimate outer = estimate_tord(body.arc(0), body.arc(body.n_theta - 1));
    CHECK(std::fabs(outer.exponent - beta) <= 0.05 * beta);
    MetricGraph g = build_metric_graph(body);
    TordEstimate inner = estimate_tord_inner(g, 0, 0, 0, body.n_theta - 1);
    CHECK(std::fabs(inner.exponent - beta) <= 0.1 * beta);
  }
}

TEST_CASE("projection distortion") {
  KnotCurve k = preset("torus-2-3", 256);
  std::vector<double> ladder = dyadic_ladder(12);
  SampledSurface x = hornify(k, kAxis, 2.0, ladder, 0.2);

  SUBCASE("a patch inside the plane has distortion one") {
    double theta = 2.0 * M_PI * 20 / 256;
    double h = 1e-6;
    Vec4 tangent = k.delta(theta + h) - k.delta(theta - h);
    Vec4 e2 = normalized(reject(tangent, kAxis.dir));
    SampledSurface flat;
    flat.name = "flat_patch";
    flat.ladder = ladder;
    flat.n_theta = 8;
    flat.pts.reserve(static_cast<std::size_t>(flat.size()));
    for (double t : ladder)
      for (int j = 0; j < 8; ++j) {
        double ang = 0.05 + 0.01 * j;
        flat.pts.push_back(t * (std::cos(ang) * kAxis.dir + std::sin(ang) * e2));
      }
    flat.theta_tags.assign(8, "");
    CHECK(projection_distortion(flat, k, theta, kAxis) == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("distortion is monotone as the window shrinks") {
    double prev = 1e300;
    for (int span : {60, 40, 24, 12, 6}) {
      SampledSurface t = sub_triangle(x, 20, 20 + span);
      double d = projection_distortion(t, k, 2.0 * M_PI * 20 / 256, kAxis);
      CHECK(d <= prev + 1e-9);
      CHECK(std::isfinite(d));
      prev = d;
    }
  }
}

TEST_CASE("universal triangle construction") {
  std::vector<double> ladder = dyadic_ladder(12);

  SUBCASE("unknot input closes to a trivial link at every scale") {
    KnotCurve k = preset("unknot");
    UniversalTriangle ut = build_universal_triangle(k, kAxis, 2.0, ladder);
    for (int kk : {0, 5, 12}) {
      LinkCurve link = ut.union_link(kk);
      CHECK(link.closed);
      CHECK(link_jones(link) == laurent_one("t"));
    }
  }

  SUBCASE("trefoil input carries the trefoil at every scale") {
    KnotCurve k = preset("torus-2-3");
    UniversalTriangle ut = build_universal_triangle(k, kAxis, 2.0, ladder);
    LaurentPoly left = oracle::trefoil_jones_left();
    for (int kk : {0, 4, 8, 12}) {
      LaurentPoly j = link_jones(ut.union_link(kk));
      CHECK((j == left || j == left.mirrored()));
    }

    SUBCASE("pieces share their boundary arcs exactly") {
      for (int kk = 0; kk <= 12; ++kk) {
        CHECK(ut.glue1.at(0, kk) == ut.body.at(ut.body.n_theta - 1, kk));
        CHECK(ut.glue2.at(0, kk) == ut.body.at(0, kk));
        CHECK(ut.closing.at(0, kk) == ut.glue1.at(ut.glue1.n_theta - 1, kk));
        CHECK(ut.closing.at(ut.closing.n_theta - 1, kk) ==
              ut.glue2.at(ut.glue2.n_theta - 1, kk));
      }
    }

    SUBCASE("without the closing cone the link is an open arc") {
      LinkCurve open_arc = ut.union_link(3, /*include_closing=*/false);
      CHECK_FALSE(open_arc.closed);
      LinkCurve body_only = extract_link(ut.body, 3);
      CHECK_FALSE(body_only.closed);
    }

    SUBCASE("the window boundaries are simple orbits") {
      AxisTube tube(2.0, 0.2);
      CHECK(is_simple(ut.theta1, k, kAxis, tube).simple);
      CHECK(is_simple(ut.theta2, k, kAxis, tube).simple);
      CHECK(ut.theta1 < ut.theta2);
    }

    SUBCASE("outer rays sit outside the tube with the reroute long enough") {
      CHECK(ut.x1 > ut.tube_angle);
      CHECK(ut.x2 > ut.tube_angle);
      double a1 = unit_angle(k.delta(ut.theta1), kAxis.dir);
      double a2 = unit_angle(k.delta(ut.theta2), kAxis.dir);
      double tau_len = unit_angle(std::cos(ut.x1) * kAxis.dir + std::sin(ut.x1) * ut.v1,
                                  std::cos(ut.x2) * kAxis.dir + std::sin(ut.x2) * ut.v2);
      CHECK((ut.x1 - a1) + (ut.x2 - a2) + tau_len >= ut.body_length_unit - 1e-9);
    }

    SUBCASE("the triangle without the closing cone is LNE-consistent") {
      MetricGraph g = build_metric_graph(ut.triangle_set());
      LneReport rep = lne_verdict(g);
      CHECK(rep.lne_consistent);
    }

    SUBCASE("orders across the glue seam match the inner-order minimum") {
      // gamma1 in the body, gamma2 in a glue triangle: the outer order of
      // the pair equals the smaller of their inner orders to the shared
      // boundary orbit
      MetricGraph g = build_metric_graph(ut.closed_set());
      int body_col = ut.body.n_theta / 2;
      int boundary_col = ut.body.n_theta - 1;  // gamma_theta1, also glue1 col 0
      for (int glue_col : {ut.glue1.n_theta / 2, 3 * ut.glue1.n_theta / 4}) {
        TordEstimate outer = estimate_tord(ut.body.arc(body_col), ut.glue1.arc(glue_col));
        TordEstimate inn_body = estimate_tord_inner(g, 0, body_col, 0, boundary_col);
        TordEstimate inn_glue = estimate_tord_inner(g, 1, glue_col, 1, 0);
        double expected = std::min(inn_body.exponent, inn_glue.exponent);
        CHECK(outer.exponent == doctest::Approx(expected).epsilon(0.08));
      }
    }
  }

  SUBCASE("mismatched pieces fail to stitch") {
    KnotCurve k = preset("torus-2-3");
    UniversalTriangle ut = build_universal_triangle(k, kAxis, 2.0, ladder);
    std::vector<LinkCurve> pieces;
    pieces.push_back(extract_link(ut.body, 0));
    LinkCurve shifted = extract_link(ut.closing, 0);
    for (Vec4& p : shifted.pts) p += Vec4{0.5, 0.5, 0, 0};
    pieces.push_back(shifted);
    CHECK_THROWS_AS(stitch_link(pieces), Error);
  }
}

TEST_CASE("distinguished pair") {
  std::vector<double> ladder = dyadic_ladder(12);
  KnotCurve k = preset("torus-2-3");
  CHECK_THROWS_AS(build_counterexample_pair(k, kAxis, 1.0, ladder), Error);

  CounterexamplePair pair = build_counterexample_pair(k, kAxis, 2.0, ladder);
  LaurentPoly ref = oracle::trefoil_jones_left();

  SUBCASE("the cone side repeats the knot at every scale") {
    for (int kk : {0, 6, 12}) {
      LaurentPoly j = link_jones(extract_link(pair.cone, kk));
      CHECK((j == ref || j == ref.mirrored()));
    }
  }

  SUBCASE("rescaled links of the rerouted side approach the flat triangle") {
    LinkCurve limit = pair.rerouted.tangent_link(512);
    ConeReport rep = estimate_tangent_cone(pair.rerouted.closed_set(), limit.pts);
    CHECK(rep.converged);
    CHECK(rep.to_candidate.back() <= 3.0 * rep.pitch);
    // every link point falls into the limit set, monotonically up to the
    // sampling floor of the limit polyline itself
    double floor = 0.5 * slice_polyline_length(limit.pts, true) / limit.pts.size();
    double prev = 1e300;
    for (int kk = 0; kk <= 12; ++kk) {
      LinkCurve link = pair.rerouted.union_link(kk);
      double d = kernels::directed_hausdorff(link.pts, limit.pts);
      CHECK(d <= prev + 0.1 * floor);
      CHECK(d <= 3.0 * floor + 0.1 * (kk == 0 ? 1.0 : std::pow(0.5, kk - 1)));
      prev = d;
    }
  }

  SUBCASE("tangent links are certified distinct") {
    LaurentPoly jy = link_jones(pair.rerouted.tangent_link());
    LaurentPoly jc = link_jones(extract_link(pair.cone, 0));
    CHECK(jy == laurent_one("t"));
    CHECK((jc == ref || jc == ref.mirrored()));
    CHECK(certify_distinct_jones(jy, jc) == DistinctVerdict::Distinct);
  }
}
