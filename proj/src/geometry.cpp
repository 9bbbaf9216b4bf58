#include "mkf/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mkf {

QuasiPolar quasi_polar_decompose(const Vec4& x, const AxisLine& ell) {
  double t = norm(x);
  if (t == 0.0) fail(Err::ZeroPoint, "quasi-polar coordinates undefined at the origin");

  QuasiPolar q;
  q.t = t;
  Vec4 w = reject(x, ell.dir);
  double wn = norm(w);
  double axial = dot(x, ell.dir);
  if (wn <= 1e-12 * t) {
    if (axial < 0.0)
      fail(Err::AntipodalPoint, "direction undefined opposite the axis");
    q.rho = 0.0;
    q.v = Vec4{};
    q.on_axis = true;
    return q;
  }
  q.rho = distance(x, ell.at(t));
  q.v = w / wn;
  q.on_axis = false;
  return q;
}

Vec4 quasi_polar_reconstruct(const QuasiPolar& q, const AxisLine& ell) {
  if (q.on_axis || q.rho == 0.0) return ell.at(q.t);
  if (q.rho >= 2.0 * q.t) fail(Err::InvalidOffset, "chordal offset must be below the diameter");
  // Walk the great circle c(s) = t (cos s * dir + sin s * v) until the chord
  // from ell(t) reaches rho: ||c(s) - ell(t)|| = 2 t sin(s/2).
  double s = 2.0 * std::asin(q.rho / (2.0 * q.t));
  return q.t * (std::cos(s) * ell.dir + std::sin(s) * q.v);
}

bool horn_neighborhood_contains(const Vec4& z, std::span<const Vec4> samples, double beta,
                                double eta) {
  if (samples.empty()) fail(Err::EmptySet, "horn neighborhood of an empty sample set");
  if (!(eta > 0.0) || !(beta >= 1.0)) fail(Err::ConfigInvalid, "need eta > 0 and beta >= 1");
  for (const Vec4& x : samples) {
    double r = norm(x);
    if (distance(z, x) < eta * std::pow(r, beta)) return true;
  }
  return false;
}

AxisTube::AxisTube(double beta_, double eta_) : beta(beta_), eta(eta_) {
  if (!(eta > 0.0) || !(beta >= 1.0)) fail(Err::ConfigInvalid, "need eta > 0 and beta >= 1");
  if (eta * std::pow(s_cap, beta) >= 1.0 + s_cap)
    fail(Err::ConfigInvalid, "horn neighborhood degenerate: amplitude too large for the cap");
  // The gap is monotone in the polar angle, so the boundary angle is the
  // unique sign change; bisect it once.
  double lo = 0.0, hi = M_PI;
  if (signed_gap(hi) < 0.0) {
    boundary_angle_ = M_PI;
    return;
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (signed_gap(mid) < 0.0 ? lo : hi) = mid;
  }
  boundary_angle_ = 0.5 * (lo + hi);
}

double AxisTube::signed_gap(double angle) const {
  double c = std::cos(angle);
  // minimize f(s) = sqrt(1 - 2 c s + s^2) - eta s^beta over (0, s_cap]
  auto f = [&](double s) {
    return std::sqrt(std::max(0.0, 1.0 - 2.0 * c * s + s * s)) - eta * std::pow(s, beta);
  };
  const int grid = 96;
  double best = f(s_cap);
  double best_s = s_cap;
  for (int i = 1; i < grid; ++i) {
    double s = s_cap * i / grid;
    double v = f(s);
    if (v < best) {
      best = v;
      best_s = s;
    }
  }
  // golden-section refinement around the best grid point
  double a = std::max(1e-9, best_s - s_cap / grid);
  double b = std::min(s_cap, best_s + s_cap / grid);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  return std::min(best, std::min(f1, f2));
}

namespace {

// Solve g(u) = u^2 + q * u^(2p) = t^2 for u in (0, t]; g is strictly
// increasing, Newton with bisection safeguard.
double solve_norm_param(double q, double p, double t) {
  if (q == 0.0) return t;
  double target = t * t;
  double lo = 0.0, hi = t, u = t;
  for (int it = 0; it < 200; ++it) {
    double g = u * u + q * std::pow(u, 2.0 * p) - target;
    if (std::fabs(g) < 1e-15 * target) break;
    (g > 0.0 ? hi : lo) = u;
    double dg = 2.0 * u + 2.0 * p * q * std::pow(u, 2.0 * p - 1.0);
    double un = u - g / dg;
    u = (un > lo && un < hi) ? un : 0.5 * (lo + hi);
  }
  return u;
}

}  // namespace

Vec4 standard_triangle_point(double alpha, double x, double f) {
  return {x, f * std::pow(x, alpha), 0.0, 0.0};
}

SampledSurface sample_standard_triangle(double alpha, int fractions,
                                        const std::vector<double>& ladder) {
  if (!(alpha >= 1.0)) fail(Err::ConfigInvalid, "triangle exponent must be >= 1");
  if (fractions < 2) fail(Err::ConfigInvalid, "need at least 2 fraction curves");
  SampledSurface s;
  s.name = "standard_triangle";
  s.ladder = ladder;
  s.n_theta = fractions;
  s.theta_wraps = false;
  s.pts.reserve(static_cast<std::size_t>(s.size()));
  for (double t : ladder) {
    for (int j = 0; j < fractions; ++j) {
      double f = static_cast<double>(j) / (fractions - 1);
      double x = solve_norm_param(f * f, alpha, t);
      s.pts.push_back(standard_triangle_point(alpha, x, f));
    }
  }
  s.theta_tags.assign(static_cast<std::size_t>(fractions), "");
  s.theta_tags.front() = "l0";
  s.theta_tags.back() = "l1";
  return s;
}

SampledSurface sample_standard_horn(double beta, int angular, const std::vector<double>& ladder) {
  if (!(beta >= 1.0)) fail(Err::ConfigInvalid, "horn exponent must be >= 1");
  if (angular < 3) fail(Err::ConfigInvalid, "need at least 3 angular samples");
  SampledSurface s;
  s.name = "standard_horn";
  s.ladder = ladder;
  s.n_theta = angular;
  s.theta_wraps = true;
  s.pts.reserve(static_cast<std::size_t>(s.size()));
  for (double t : ladder) {
    double u = solve_norm_param(1.0, beta, t);  // u^2 + u^(2 beta) = t^2
    double r = std::pow(u, beta);
    for (int j = 0; j < angular; ++j) {
      double phi = 2.0 * M_PI * j / angular;
      s.pts.push_back({r * std::cos(phi), r * std::sin(phi), u, 0.0});
    }
  }
  s.theta_tags.assign(static_cast<std::size_t>(angular), "");
  return s;
}

SampledSurface cone_over(std::span<const Vec4> sphere_pts, const std::vector<double>& ladder,
                         bool closed) {
  if (sphere_pts.empty()) fail(Err::EmptySet, "cone over an empty set");
  for (const Vec4& v : sphere_pts)
    if (std::fabs(norm(v) - 1.0) > 1e-9)
      fail(Err::NonSpherical, "cone input must lie on the unit sphere");
  SampledSurface s;
  s.name = "cone";
  s.ladder = ladder;
  s.n_theta = static_cast<int>(sphere_pts.size());
  s.theta_wraps = closed;
  s.pts.reserve(static_cast<std::size_t>(s.size()));
  for (double t : ladder)
    for (const Vec4& v : sphere_pts) s.pts.push_back(t * v);
  s.theta_tags.assign(sphere_pts.size(), "");
  return s;
}

}  // namespace mkf
