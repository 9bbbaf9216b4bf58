#pragma once

#include <span>
#include <vector>

#include "mkf/errors.hpp"
#include "mkf/surface.hpp"
#include "mkf/vec4.hpp"

namespace mkf {

inline constexpr double kUnitTol = 1e-12;   // unit-norm checks
inline constexpr double kGeomTol = 1e-9;    // geometric identities, relative

/// Ray ell(t) = t * dir, t >= 0, through the origin.
struct AxisLine {
  Vec4 dir;

  explicit AxisLine(const Vec4& d) : dir(d) {
    double n = norm(d);
    if (std::fabs(n - 1.0) > kUnitTol) fail(Err::ConfigInvalid, "axis direction must be unit");
  }

  Vec4 at(double t) const { return t * dir; }
};

/// Quasi-polar coordinates around an axis: scale t = ||x||, chordal offset
/// rho = ||x - ell(t)||, and the unit initial direction v of the great
/// circle from ell(t) toward x on the radius-t sphere. v is orthogonal to
/// the axis; when rho = 0 it is zero-flagged (all components zero) and must
/// be compared structurally, never arithmetically.
struct QuasiPolar {
  double t = 0.0;
  double rho = 0.0;
  Vec4 v;
  bool on_axis = false;
};

QuasiPolar quasi_polar_decompose(const Vec4& x, const AxisLine& ell);
Vec4 quasi_polar_reconstruct(const QuasiPolar& q, const AxisLine& ell);

/// Membership in the beta-horn neighborhood of amplitude eta of a sampled
/// set: true iff some sample x satisfies ||z - x|| < eta * ||x||^beta. The
/// answer is a sampling-resolution-dependent approximation of the exact
/// neighborhood.
bool horn_neighborhood_contains(const Vec4& z, std::span<const Vec4> samples, double beta,
                                double eta);

/// Rotationally invariant section of the horn neighborhood of the axis ray
/// at unit scale. A unit point z lies inside iff its polar angle from the
/// axis direction is below boundary_angle(). Witness scales are capped at
/// s_cap, which fixes the germ scale of the membership test (without a cap
/// a beta > 1 horn flares out and eventually covers every direction).
struct AxisTube {
  double beta;
  double eta;
  double s_cap = 2.0;

  AxisTube(double beta_, double eta_);

  /// min over s in (0, s_cap] of ||p - s*d|| - eta*s^beta for a unit point
  /// at polar angle `angle` from the axis; negative means inside.
  double signed_gap(double angle) const;

  /// Polar angle of the tube boundary at unit scale.
  double boundary_angle() const { return boundary_angle_; }

  bool contains_unit_angle(double angle) const { return angle < boundary_angle_; }

 private:
  double boundary_angle_ = 0.0;
};

/// Exact point of the standard triangle region {0 <= y <= x^alpha}: the
/// curve y = f * x^alpha at abscissa x, embedded in the first two
/// coordinates of R^4.
Vec4 standard_triangle_point(double alpha, double x, double f);

/// Samples the standard alpha-Hoelder triangle on `fractions` curves
/// y = f x^alpha, f in [0,1], each reparametrized by distance to the origin
/// over the ladder. Boundary columns are tagged "l0" (f = 0) and "l1"
/// (f = 1).
SampledSurface sample_standard_triangle(double alpha, int fractions,
                                        const std::vector<double>& ladder);

/// Samples the standard beta-horn {x^2 + y^2 = t^(2 beta)}: points
/// (u^beta cos phi, u^beta sin phi, u, 0) with u chosen per node so the
/// sample norm equals the ladder scale.
SampledSurface sample_standard_horn(double beta, int angular,
                                    const std::vector<double>& ladder);

/// Cone over a unit-sphere curve or segment: {t * v}. Throws NonSpherical
/// if an input sample is off the unit sphere by more than 1e-9.
SampledSurface cone_over(std::span<const Vec4> sphere_pts, const std::vector<double>& ladder,
                         bool closed);

}  // namespace mkf
