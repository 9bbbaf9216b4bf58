#include "mkf/knot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mkf/kernels.hpp"

namespace mkf {

namespace {

double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
  double m[4][4];
  const Vec4* rows[4] = {&a, &b, &c, &d};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = (*rows[i])[static_cast<std::size_t>(j)];
  double det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < 4; ++r) {
      double f = m[r][col] / m[col][col];
      for (int j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
    }
  }
  return det;
}

}  // namespace

SphereChart::SphereChart(const Vec4& pole_unit) : pole(pole_unit) {
  // Gram-Schmidt the standard basis against the pole; orientation pinned
  // so charts at different poles carry the same chirality.
  Vec4 frame[3];
  int have = 0;
  for (int i = 0; i < 4 && have < 3; ++i) {
    Vec4 cand = reject(basis4(i), pole);
    for (int j = 0; j < have; ++j) cand = reject(cand, frame[j]);
    double n = norm(cand);
    if (n > 1e-6) frame[have++] = cand / n;
  }
  if (det4(pole, frame[0], frame[1], frame[2]) < 0.0) frame[2] = -frame[2];
  f1 = frame[0];
  f2 = frame[1];
  f3 = frame[2];
}

Vec4 SphereChart::to_sphere(const std::array<double, 3>& u) const {
  double r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
  double inv = 1.0 / (1.0 + r2);
  Vec4 planar = u[0] * f1 + u[1] * f2 + u[2] * f3;
  return inv * ((1.0 - r2) * pole + 2.0 * planar);
}

std::array<double, 3> SphereChart::from_sphere(const Vec4& x) const {
  double denom = 1.0 + dot(x, pole);
  if (denom <= 1e-12) fail(Err::AntipodalPoint, "chart undefined at the pole's antipode");
  double inv = 1.0 / denom;
  return {inv * dot(x, f1), inv * dot(x, f2), inv * dot(x, f3)};
}

namespace {

SpaceCurve preset_space_curve(const std::string& kind, bool* trivial) {
  *trivial = false;
  if (kind == "unknot") {
    *trivial = true;
    return [](double u) -> std::array<double, 3> { return {std::cos(u), std::sin(u), 0.0}; };
  }
  if (kind == "figure-eight") {
    // closed space curve tracing the figure-eight knot, max radius 1
    return [](double u) -> std::array<double, 3> {
      double r = (2.0 + std::cos(2.0 * u)) / 3.0;
      return {r * std::cos(3.0 * u), r * std::sin(3.0 * u), std::sin(4.0 * u) / 3.0};
    };
  }
  if (kind.rfind("torus-", 0) == 0) {
    std::size_t dash = kind.find('-', 6);
    if (dash == std::string::npos) fail(Err::ConfigInvalid, "torus preset must be torus-p-q");
    int p = std::stoi(kind.substr(6, dash - 6));
    int q = std::stoi(kind.substr(dash + 1));
    if (p < 1 || q < 1 || std::gcd(p, q) != 1)
      fail(Err::ConfigInvalid, "torus-p-q needs coprime positive p, q");
    return [p, q](double u) -> std::array<double, 3> {
      double r = (2.0 + std::cos(q * u)) / 3.0;
      return {r * std::cos(p * u), r * std::sin(p * u), std::sin(q * u) / 3.0};
    };
  }
  fail(Err::ConfigInvalid, "unknown knot preset '" + kind + "'");
}

void validate_curve(KnotCurve& knot, const AxisLine& ell, const KnotOptions& opts,
                    bool throw_on_violation) {
  (void)throw_on_violation;
  for (const Vec4& x : knot.samples)
    if (std::fabs(norm(x) - 1.0) > 1e-9)
      fail(Err::NonSpherical, knot.name + ": sample off the unit sphere");
  if (distance(knot.delta(0.0), knot.delta(2.0 * M_PI)) > 1e-9)
    fail(Err::ConfigInvalid, knot.name + ": curve is not closed");

  double length = 0.0;
  for (int j = 0; j < knot.m; ++j)
    length += distance(knot.sample(j), knot.sample((j + 1) % knot.m));
  double mean_pitch = length / knot.m;

  knot.min_self_distance =
      kernels::min_doubly_critical_gap(knot.samples, /*closed=*/true, /*min_sep=*/2);
  if (!(knot.min_self_distance > opts.embed_factor * mean_pitch))
    fail(Err::SelfIntersection,
         knot.name + ": self distance below the embeddedness threshold");

  for (const Vec4& x : knot.samples) {
    double rho = distance(x, ell.dir);
    if (rho >= opts.tube_margin * opts.eta)
      fail(Err::TubeViolation, knot.name + ": sample leaves the horn neighborhood");
    if (rho < 1e-4) fail(Err::TubeViolation, knot.name + ": curve touches the axis");
  }
  if (length > opts.length_cap)
    fail(Err::TubeViolation, knot.name + ": spherical length above the cap");
}

}  // namespace

KnotCurve make_preset_knot(const std::string& kind, const AxisLine& ell,
                           const KnotOptions& opts) {
  if (opts.m < 64) fail(Err::ConfigInvalid, "presets need at least 64 samples");
  bool trivial = false;
  SpaceCurve curve = preset_space_curve(kind, &trivial);
  SphereChart chart(ell.dir);

  auto build = [&](double s) {
    KnotCurve k;
    k.name = kind;
    k.m = opts.m;
    k.scale = s;
    k.trivial = trivial;
    k.delta = [curve, chart, s](double u) {
      std::array<double, 3> p = curve(u);
      return chart.to_sphere({s * p[0], s * p[1], s * p[2]});
    };
    k.samples.resize(static_cast<std::size_t>(opts.m));
    for (int j = 0; j < opts.m; ++j)
      k.samples[static_cast<std::size_t>(j)] = k.delta(2.0 * M_PI * j / opts.m);
    return k;
  };

  if (opts.scale > 0.0) {
    KnotCurve k = build(opts.scale);
    validate_curve(k, ell, opts, true);
    return k;
  }
  // largest dyadic homothety that passes validation
  std::string last_err;
  for (double s = 0.5; s > 1e-7; s *= 0.5) {
    KnotCurve k = build(s);
    try {
      validate_curve(k, ell, opts, true);
      return k;
    } catch (const Error& e) {
      if (e.code() == Err::SelfIntersection) throw;  // shrinking will not fix sampling
      last_err = e.what();
    }
  }
  fail(Err::TubeViolation, kind + ": no admissible scale (" + last_err + ")");
}

KnotCurve make_knot_from_samples(std::string name, std::vector<Vec4> samples,
                                 const KnotOptions& opts) {
  if (samples.size() < 8) fail(Err::ConfigInvalid, "need at least 8 samples");
  KnotCurve k;
  k.name = std::move(name);
  k.m = static_cast<int>(samples.size());
  k.samples = std::move(samples);
  k.scale = 1.0;
  int m = k.m;
  std::vector<Vec4> pts = k.samples;
  k.delta = [pts, m](double u) {
    double x = u / (2.0 * M_PI) * m;
    int j = static_cast<int>(std::floor(x));
    double f = x - j;
    j = ((j % m) + m) % m;
    const Vec4& a = pts[static_cast<std::size_t>(j)];
    const Vec4& b = pts[static_cast<std::size_t>((j + 1) % m)];
    double ang = unit_angle(a, b);
    if (ang < 1e-14) return a;
    double sa = std::sin((1.0 - f) * ang) / std::sin(ang);
    double sb = std::sin(f * ang) / std::sin(ang);
    return normalized(sa * a + sb * b);
  };
  validate_curve(k, AxisLine(basis4(0)), opts, true);
  return k;
}

SphericalGeodesic geodesic_between(const Vec4& a, const Vec4& b) {
  if (std::fabs(norm(a) - 1.0) > 1e-9 || std::fabs(norm(b) - 1.0) > 1e-9)
    fail(Err::NonSpherical, "geodesic endpoints must be unit vectors");
  double c = dot(a, b);
  if (c >= 1.0 - 1e-12) fail(Err::AntipodalOrEqual, "geodesic endpoints coincide");
  if (c <= -1.0 + 1e-12) fail(Err::AntipodalOrEqual, "geodesic endpoints are antipodal");
  SphericalGeodesic geo;
  geo.a = a;
  geo.b = b;
  geo.ortho = normalized(reject(b, a));
  geo.angle = std::acos(clamp_unit(c));
  return geo;
}

namespace {

// golden-section minimum of f over [lo, hi]
template <class F>
double golden_min(F&& f, double lo, double hi, int iters = 80) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace

SimplicityReport is_simple(double theta, const KnotCurve& knot, const AxisLine& ell,
                           const AxisTube& tube, const SimplicityOptions& opts) {
  SimplicityReport rep;
  rep.theta = theta;

  Vec4 y = knot.delta(theta);
  Vec4 transverse = reject(y, ell.dir);
  double tn = norm(transverse);
  if (tn < 1e-9) fail(Err::DegenerateGeodesic, "delta(theta) on the axis line");
  Vec4 v = transverse / tn;

  double curve_len = 0.0;
  for (int j = 0; j < knot.m; ++j)
    curve_len += distance(knot.sample(j), knot.sample((j + 1) % knot.m));
  double spacing = curve_len / knot.m;
  double hit_threshold = opts.hit_tol_factor * spacing;

  // residual distance of delta(u) from the plane span(dir, v)
  auto res = [&](double u) {
    Vec4 x = knot.delta(u);
    Vec4 r = x - dot(x, ell.dir) * ell.dir - dot(x, v) * v;
    return norm(r);
  };

  // collect local minima of the sampled residual, refine each candidate
  std::vector<double> res_j(static_cast<std::size_t>(knot.m));
  for (int j = 0; j < knot.m; ++j) res_j[static_cast<std::size_t>(j)] = res(knot.param(j));
  double du = 2.0 * M_PI / knot.m;

  bool grazing = false;
  std::vector<GeodesicKnotHit> hits;
  for (int j = 0; j < knot.m; ++j) {
    double rm = res_j[static_cast<std::size_t>((j - 1 + knot.m) % knot.m)];
    double r0 = res_j[static_cast<std::size_t>(j)];
    double rp = res_j[static_cast<std::size_t>((j + 1) % knot.m)];
    if (r0 > rm || r0 > rp || r0 >= hit_threshold) continue;
    double u0 = knot.param(j);
    double u = golden_min([&](double t) { return res(t); }, u0 - du, u0 + du);
    double rmin = res(u);
    if (rmin >= hit_threshold) continue;
    if (rmin > 1e-7) {  // grazes the plane without crossing it
      grazing = true;
      continue;
    }
    Vec4 x = knot.delta(u);
    double s = std::atan2(dot(x, v), dot(x, ell.dir));
    if (s < 0.0) s += 2.0 * M_PI;
    // crossing angle between knot tangent and circle tangent
    double h = 1e-6;
    Vec4 tan_k = normalized(knot.delta(u + h) - knot.delta(u - h));
    Vec4 tan_c = -std::sin(s) * ell.dir + std::cos(s) * v;
    double ang = std::acos(clamp_unit(std::fabs(dot(tan_k, tan_c)))) * 180.0 / M_PI;
    hits.push_back({s, u, ang});
  }

  std::sort(hits.begin(), hits.end(),
            [](const GeodesicKnotHit& a, const GeodesicKnotHit& b) { return a.s < b.s; });
  // merge duplicate detections of one geometric hit
  std::vector<GeodesicKnotHit> merged;
  for (const auto& h : hits) {
    if (!merged.empty() && std::fabs(h.s - merged.back().s) < 0.5 * du)
      continue;
    merged.push_back(h);
  }
  rep.hits = std::move(merged);

  double a_theta = std::atan2(dot(y, v), dot(y, ell.dir));
  if (a_theta < 0.0) a_theta += 2.0 * M_PI;
  for (std::size_t i = 0; i < rep.hits.size(); ++i)
    if (std::fabs(rep.hits[i].s - a_theta) < 0.5 * du) rep.k_index = static_cast<int>(i);
  if (rep.k_index < 0) {
    // the defining hit must always be present; treat its absence as grazing
    rep.transversal = false;
    rep.simple = false;
    return rep;
  }

  rep.transversal = !grazing;
  for (const auto& h : rep.hits)
    if (h.angle_deg < opts.min_angle_deg) rep.transversal = false;

  rep.u_exit = tube.boundary_angle();
  rep.v_entry = 2.0 * M_PI - tube.boundary_angle();
  std::size_t k = static_cast<std::size_t>(rep.k_index);
  double lo_after = rep.hits[k].s;
  double hi_after = (k + 1 < rep.hits.size()) ? rep.hits[k + 1].s : 2.0 * M_PI;
  double lo_before = (k > 0) ? rep.hits[k - 1].s : 0.0;
  double hi_before = rep.hits[k].s;
  auto count_in = [&](double lo, double hi) {
    int c = 0;
    if (rep.u_exit > lo && rep.u_exit < hi) ++c;
    if (rep.v_entry > lo && rep.v_entry < hi) ++c;
    return c;
  };
  rep.crossings_after = count_in(lo_after, hi_after);
  rep.crossings_before = count_in(lo_before, hi_before);
  rep.simple = rep.transversal && rep.crossings_after == 2;
  return rep;
}

}  // namespace mkf
