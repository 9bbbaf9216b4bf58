#include "mkf/hornification.hpp"

#include <algorithm>
#include <cmath>

#include "mkf/kernels.hpp"

namespace mkf {

Vec4 theta_action(double t, const Vec4& x_unit, const AxisLine& ell, double beta) {
  if (!(t > 0.0)) fail(Err::ConfigInvalid, "action needs t > 0");
  QuasiPolar q = quasi_polar_decompose(x_unit, ell);
  if (std::fabs(q.t - 1.0) > 1e-9) fail(Err::NonSpherical, "action input must be unit");
  double offset = std::pow(t, beta) * q.rho;
  if (offset >= 2.0 * t) fail(Err::OffsetOverflow, "rescaled offset reaches the diameter");
  QuasiPolar out;
  out.t = t;
  out.rho = offset;
  out.v = q.v;
  out.on_axis = q.on_axis;
  return quasi_polar_reconstruct(out, ell);
}

OrbitArc orbit_arc(const KnotCurve& knot, const AxisLine& ell, double beta, double theta) {
  OrbitArc o;
  o.theta = theta;
  Vec4 x = knot.delta(theta);
  o.plane_v = quasi_polar_decompose(x, ell).v;
  o.arc.t0 = 1.0;
  o.arc.eval = [x, ell, beta](double t) { return theta_action(t, x, ell, beta); };
  return o;
}

SampledSurface hornify(const KnotCurve& knot, const AxisLine& ell, double beta,
                       const std::vector<double>& ladder, double eta) {
  for (const Vec4& x : knot.samples)
    if (distance(x, ell.dir) >= eta)
      fail(Err::TubeViolation, "knot leaves the horn neighborhood, rescale first");
  SampledSurface s;
  s.name = "hornification";
  s.ladder = ladder;
  s.n_theta = knot.m;
  s.theta_wraps = true;
  s.pts.reserve(static_cast<std::size_t>(s.size()));
  for (double t : ladder)
    for (int j = 0; j < knot.m; ++j) s.pts.push_back(theta_action(t, knot.sample(j), ell, beta));
  s.theta_tags.assign(static_cast<std::size_t>(knot.m), "");
  return s;
}

namespace {

SampledSurface restrict_columns(const SampledSurface& x, const std::vector<int>& cols,
                                const char* name) {
  SampledSurface s;
  s.name = name;
  s.ladder = x.ladder;
  s.n_theta = static_cast<int>(cols.size());
  s.theta_wraps = false;
  s.pts.reserve(static_cast<std::size_t>(s.size()));
  for (int k = 0; k < x.n_scales(); ++k)
    for (int j : cols) s.pts.push_back(x.at(j, k));
  s.theta_tags.assign(cols.size(), "");
  return s;
}

}  // namespace

SampledSurface sub_triangle(const SampledSurface& x, int j1, int j2) {
  if (!x.theta_wraps) fail(Err::ConfigInvalid, "sub-triangle needs a closed-link surface");
  if (j1 < 0 || j2 >= x.n_theta || j2 <= j1) fail(Err::EmptyRange, "need 0 <= j1 < j2 < m");
  std::vector<int> cols;
  for (int j = j1; j <= j2; ++j) cols.push_back(j);
  SampledSurface s = restrict_columns(x, cols, "sub_triangle");
  s.theta_tags.front() = "gamma_theta1";
  s.theta_tags.back() = "gamma_theta2";
  return s;
}

SampledSurface sub_triangle_complement(const SampledSurface& x, int j1, int j2) {
  if (!x.theta_wraps) fail(Err::ConfigInvalid, "sub-triangle needs a closed-link surface");
  if (j1 < 0 || j2 >= x.n_theta || j2 <= j1) fail(Err::EmptyRange, "need 0 <= j1 < j2 < m");
  std::vector<int> cols;
  for (int j = j2; j <= j1 + x.n_theta; ++j) cols.push_back(j % x.n_theta);
  SampledSurface s = restrict_columns(x, cols, "body");
  s.theta_tags.front() = "gamma_theta2";
  s.theta_tags.back() = "gamma_theta1";
  return s;
}

double projection_distortion(const SampledSurface& t, const KnotCurve& knot, double theta,
                             const AxisLine& ell) {
  double h = 1e-6;
  Vec4 tangent = knot.delta(theta + h) - knot.delta(theta - h);
  Vec4 e2 = reject(tangent, ell.dir);
  double n2 = norm(e2);
  if (n2 < 1e-9 * norm(tangent))
    fail(Err::DegeneratePlane, "knot tangent parallel to the axis");
  e2 = e2 / n2;
  std::vector<std::array<double, 2>> proj(t.pts.size());
  for (std::size_t i = 0; i < t.pts.size(); ++i)
    proj[i] = {dot(t.pts[i], ell.dir), dot(t.pts[i], e2)};
  return kernels::max_projection_distortion(t.pts, proj);
}

std::vector<SimplicityReport> scan_simple(const KnotCurve& knot, const AxisLine& ell,
                                          const AxisTube& tube, int resolution,
                                          const SimplicityOptions& opts) {
  std::vector<SimplicityReport> out;
  out.reserve(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) {
    double theta = 2.0 * M_PI * i / resolution;
    try {
      out.push_back(is_simple(theta, knot, ell, tube, opts));
    } catch (const Error&) {
      SimplicityReport bad;
      bad.theta = theta;
      out.push_back(bad);
    }
  }
  return out;
}

LinkCurve UniversalTriangle::union_link(int k, bool include_closing) const {
  std::vector<LinkCurve> pieces;
  pieces.push_back(extract_link(body, k));
  pieces.push_back(extract_link(glue1, k));
  if (include_closing) pieces.push_back(extract_link(closing, k));
  pieces.push_back(extract_link(glue2, k));
  return stitch_link(pieces);
}

LinkCurve UniversalTriangle::tangent_link(int samples_per_arc) const {
  // spoke in each orbit plane from the pole out to the ray, then across the
  // closing geodesic: the link of the cone the union collapses onto
  LinkCurve out;
  out.closed = true;
  out.t = 0.0;
  auto spoke = [&](const Vec4& v, double x, bool reverse) {
    std::vector<Vec4> pts;
    for (int q = 0; q < samples_per_arc; ++q) {
      double f = static_cast<double>(q) / (samples_per_arc - 1);
      double phi = x * (reverse ? 1.0 - f : f);
      pts.push_back(std::cos(phi) * axis_dir + std::sin(phi) * v);
    }
    return pts;
  };
  std::vector<Vec4> pts = spoke(v1, x1, false);
  SphericalGeodesic tau =
      geodesic_between(pts.back(), std::cos(x2) * axis_dir + std::sin(x2) * v2);
  for (int q = 1; q < samples_per_arc; ++q) {
    double f = static_cast<double>(q) / (samples_per_arc - 1);
    pts.push_back(tau.point_at_fraction(f));
  }
  std::vector<Vec4> back = spoke(v2, x2, true);
  pts.insert(pts.end(), back.begin() + 1, back.end() - 1);
  out.pts = std::move(pts);
  return out;
}

UniversalTriangle build_universal_triangle(const KnotCurve& knot, const AxisLine& ell,
                                           double beta, const std::vector<double>& ladder,
                                           const BuildOptions& opts) {
  AxisTube tube(beta, opts.eta);
  SampledSurface horn = hornify(knot, ell, beta, ladder, opts.eta);
  const int m = knot.m;

  // --- simple window ---------------------------------------------------
  std::vector<SimplicityReport> scan =
      scan_simple(knot, ell, tube, opts.scan_resolution, opts.simplicity);
  const int r = static_cast<int>(scan.size());
  // longest circular run of simple thetas
  int best_start = -1, best_len = 0, cur_start = 0, cur_len = 0;
  for (int i = 0; i < 2 * r; ++i) {
    if (scan[static_cast<std::size_t>(i % r)].simple) {
      if (cur_len == 0) cur_start = i;
      if (++cur_len > best_len && cur_len <= r) {
        best_len = cur_len;
        best_start = cur_start;
      }
    } else {
      cur_len = 0;
    }
  }
  if (best_len < 3) fail(Err::NoSimpleWindow, "theta scan found no simple window");
  double run_lo = 2.0 * M_PI * best_start / r;
  double run_hi = 2.0 * M_PI * (best_start + best_len - 1) / r;

  // Anchor at the window's farthest point from the pole (a critical theta,
  // so the two boundary orbits sit at nearly equal polar angle), then grow
  // the window toward whichever side has room. Candidates that would wrap
  // the grid seam are skipped; the scan covers [0, 4pi) so an unwrapped
  // equivalent of a wrapping run is always seen.
  double grid_step = 2.0 * M_PI / m;
  int jc = -1, room = 0;
  bool rightward = true;
  double rho_best = -1.0;
  for (int j = 2; j < 2 * m; ++j) {
    double th = grid_step * j;
    if (th < run_lo || th > run_hi) continue;
    int right = static_cast<int>(std::floor((run_hi - th) / grid_step));
    int left = static_cast<int>(std::floor((th - run_lo) / grid_step));
    if (j < m) {
      right = std::min(right, m - 1 - j);
      left = std::min(left, j);
    } else {
      left = std::min(left, j - m);
      right = std::min(right, 2 * m - 1 - j);
    }
    if (std::max(right, left) < 2) continue;
    double rho = distance(knot.delta(th), ell.dir);
    if (rho > rho_best) {
      rho_best = rho;
      jc = j;
      rightward = right >= left;
      room = std::max(right, left);
    }
  }
  if (jc < 0) fail(Err::NoSimpleWindow, "simple window narrower than the grid step");

  int span = std::min(room, std::max(2, m / 32));
  int j1 = rightward ? jc : jc - span;
  int j2 = rightward ? jc + span : jc;
  double theta_q = grid_step * jc;  // plane anchor for the distortion bound
  if (j1 >= m) {
    j1 -= m;
    j2 -= m;
    theta_q -= 2.0 * M_PI;
  }

  double distortion = 0.0;
  while (true) {
    SampledSurface t = sub_triangle(horn, j1, j2);
    distortion = projection_distortion(t, knot, theta_q, ell);
    if (distortion <= opts.distortion_bound || j2 - j1 <= 2) break;
    if (rightward)
      j2 = j1 + std::max(2, (j2 - j1) / 2);
    else
      j1 = j2 - std::max(2, (j2 - j1) / 2);
  }
  if (distortion > opts.distortion_bound)
    fail(Err::NoSimpleWindow, "projection distortion stays above the bound");

  UniversalTriangle ut;
  ut.beta = beta;
  ut.knot_name = knot.name;
  ut.j1 = j1;
  ut.j2 = j2;
  ut.theta1 = grid_step * j1;
  ut.theta2 = grid_step * j2;
  ut.tube_angle = tube.boundary_angle();
  ut.axis_dir = ell.dir;

  // re-certify the chosen boundary orbits
  for (double th : {ut.theta1, ut.theta2}) {
    SimplicityReport rep = is_simple(th, knot, ell, tube, opts.simplicity);
    if (!rep.simple)
      fail(Err::NoSimpleWindow, "window boundary orbit fails the simplicity conditions");
  }

  ut.body = sub_triangle_complement(horn, j1, j2);
  ut.body_length_unit =
      slice_polyline_length(ut.body.slice(0), false) / ladder.front();

  QuasiPolar q1 = quasi_polar_decompose(knot.delta(ut.theta1), ell);
  QuasiPolar q2 = quasi_polar_decompose(knot.delta(ut.theta2), ell);
  ut.v1 = q1.v;
  ut.v2 = q2.v;
  double a1 = 2.0 * std::asin(q1.rho / 2.0);
  double a2 = 2.0 * std::asin(q2.rho / 2.0);

  // outer ray positions: past the tube exit, and far enough out that the
  // reroute is never an inner shortcut past the excision at the coarsest
  // scale (spokes + closing geodesic at least as long as the body slice)
  double x = std::max(tube.boundary_angle() + opts.exit_margin,
                      0.5 * (ut.body_length_unit + a1 + a2) + opts.exit_margin);
  double x_cap = 2.0 * M_PI - tube.boundary_angle() - opts.exit_margin;
  if (x >= std::min(M_PI - 0.05, x_cap))
    fail(Err::ConfigInvalid, "outer rays would pass the antipode; knot scale too large");
  ut.x1 = ut.x2 = x;

  SphericalGeodesic tau{};
  for (int attempt = 0;; ++attempt) {
    Vec4 p1 = std::cos(ut.x1) * ell.dir + std::sin(ut.x1) * ut.v1;
    Vec4 p2 = std::cos(ut.x2) * ell.dir + std::sin(ut.x2) * ut.v2;
    bool ok = true;
    try {
      tau = geodesic_between(p1, p2);
    } catch (const Error&) {
      ok = false;  // coincident rays; nudge below
    }
    if (ok) {
      // transversality of the closing geodesic to both spokes
      Vec4 tan_tau_1 = tau.ortho;
      Vec4 tan_r1 = -std::sin(ut.x1) * ell.dir + std::cos(ut.x1) * ut.v1;
      SphericalGeodesic rev = geodesic_between(p2, p1);
      Vec4 tan_tau_2 = rev.ortho;
      Vec4 tan_r2 = -std::sin(ut.x2) * ell.dir + std::cos(ut.x2) * ut.v2;
      double ang1 = std::acos(clamp_unit(std::fabs(dot(tan_tau_1, tan_r1)))) * 180.0 / M_PI;
      double ang2 = std::acos(clamp_unit(std::fabs(dot(tan_tau_2, tan_r2)))) * 180.0 / M_PI;
      ut.tau_angle1_deg = ang1;
      ut.tau_angle2_deg = ang2;
      double min_pole_angle = M_PI;
      for (int q = 0; q <= 32; ++q)
        min_pole_angle = std::min(
            min_pole_angle, unit_angle(tau.point_at_fraction(q / 32.0), ell.dir));
      ok = ang1 >= opts.simplicity.min_angle_deg && ang2 >= opts.simplicity.min_angle_deg &&
           min_pole_angle > tube.boundary_angle();
    }
    double reroute = (ut.x1 - a1) + (ut.x2 - a2) + (ok ? tau.length() : 0.0);
    if (ok && reroute >= ut.body_length_unit) break;
    if (attempt >= 8) fail(Err::NoSimpleWindow, "could not place the outer rays");
    ut.x2 += 0.02;
    if (!ok && attempt % 2 == 1) ut.x1 += 0.02;
    if (reroute < ut.body_length_unit) {
      double bump = 0.5 * (ut.body_length_unit - reroute) + 0.01;
      ut.x1 += bump;
      ut.x2 += bump;
    }
    if (std::max(ut.x1, ut.x2) >= std::min(M_PI - 0.05, x_cap))
      fail(Err::ConfigInvalid, "outer rays would pass the antipode");
  }

  // Glue triangles: planar sectors between the boundary orbit and the ray.
  // Columns are log-spaced in the polar angle so the sampled sector looks
  // the same at every scale after rescaling; with uniform columns the
  // near-attachment sample pairs that realize the inner/outer sup would
  // drop out of the grid as the attachment angle shrinks.
  auto make_glue = [&](const Vec4& v, double rho, double xi, int boundary_col_theta,
                       const char* name, const char* arc_tag, const char* ray_tag) {
    SampledSurface g;
    g.name = name;
    g.ladder = ladder;
    g.n_theta = opts.glue_resolution;
    g.theta_wraps = false;
    g.pts.reserve(static_cast<std::size_t>(g.size()));
    for (int k = 0; k < static_cast<int>(ladder.size()); ++k) {
      double t = ladder[static_cast<std::size_t>(k)];
      double s_att = 2.0 * std::asin(std::min(1.0, std::pow(t, beta - 1.0) * rho / 2.0));
      double log_step = std::log(xi / s_att) / (opts.glue_resolution - 1);
      for (int c = 0; c < opts.glue_resolution; ++c) {
        if (c == 0) {
          // bitwise match with the body boundary column
          g.pts.push_back(
              theta_action(t, knot.sample(boundary_col_theta), ell, beta));
          continue;
        }
        // last column hits the ray angle exactly (seam with the closing cone)
        double phi = (c == opts.glue_resolution - 1) ? xi : s_att * std::exp(log_step * c);
        g.pts.push_back(t * (std::cos(phi) * ell.dir + std::sin(phi) * v));
      }
    }
    g.theta_tags.assign(static_cast<std::size_t>(opts.glue_resolution), "");
    g.theta_tags.front() = arc_tag;
    g.theta_tags.back() = ray_tag;
    return g;
  };
  ut.glue1 = make_glue(ut.v1, q1.rho, ut.x1, j1, "glue1", "gamma_theta1", "l1");
  ut.glue2 = make_glue(ut.v2, q2.rho, ut.x2, j2, "glue2", "gamma_theta2", "l2");

  // closing cone over the outer geodesic
  std::vector<Vec4> tau_pts;
  for (int c = 0; c < opts.closing_resolution; ++c) {
    double f = static_cast<double>(c) / (opts.closing_resolution - 1);
    tau_pts.push_back(tau.point_at_fraction(f));
  }
  // exact seam with the glue rays
  tau_pts.front() = std::cos(ut.x1) * ell.dir + std::sin(ut.x1) * ut.v1;
  tau_pts.back() = std::cos(ut.x2) * ell.dir + std::sin(ut.x2) * ut.v2;
  ut.closing = cone_over(tau_pts, ladder, /*closed=*/false);
  ut.closing.name = "closing";
  ut.closing.theta_tags.front() = "l1";
  ut.closing.theta_tags.back() = "l2";
  return ut;
}

CounterexamplePair build_counterexample_pair(const KnotCurve& knot, const AxisLine& ell,
                                             double beta, const std::vector<double>& ladder,
                                             const BuildOptions& opts) {
  if (!(beta > 1.0)) fail(Err::ConfigInvalid, "the distinguishing pair needs beta > 1");
  CounterexamplePair pair;
  pair.rerouted = build_universal_triangle(knot, ell, beta, ladder, opts);
  pair.cone = hornify(knot, ell, 1.0, ladder, opts.eta);
  pair.cone.name = "knot_cone";
  return pair;
}

}  // namespace mkf
