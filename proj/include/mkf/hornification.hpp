#pragma once

#include <optional>
#include <vector>

#include "mkf/geometry.hpp"
#include "mkf/knot.hpp"
#include "mkf/metric.hpp"
#include "mkf/projection.hpp"
#include "mkf/surface.hpp"

namespace mkf {

/// The scaling action on the horn neighborhood of the axis: decompose x at
/// unit scale, rescale the chordal offset by t^beta, reconstruct at scale
/// t. Orbits stay inside the 2-plane spanned by the axis and the point's
/// transverse direction.
Vec4 theta_action(double t, const Vec4& x_unit, const AxisLine& ell, double beta);

/// Orbit of one knot point under the action, as a callable arc with
/// ||eval(t)|| = t. The whole orbit lies in the 2-plane spanned by the
/// axis and the point's transverse direction.
struct OrbitArc {
  double theta = 0.0;
  Vec4 plane_v;  // transverse direction of that plane
  Arc arc;
};

OrbitArc orbit_arc(const KnotCurve& knot, const AxisLine& ell, double beta, double theta);

/// Hornified knot: grid {theta_action(t_k, delta(theta_j))}. Every slice is
/// a copy of the knot compressed toward the pole by the factor t^(beta-1).
SampledSurface hornify(const KnotCurve& knot, const AxisLine& ell, double beta,
                       const std::vector<double>& ladder, double eta);

/// Restriction of a hornified grid to the columns [j1, j2] (inclusive).
/// Boundary columns are tagged "gamma_theta1" / "gamma_theta2". With both
/// boundaries orbit arcs the result is a beta-Hoelder triangle.
SampledSurface sub_triangle(const SampledSurface& x, int j1, int j2);

/// Complementary restriction: columns j2..j1 (wrapping), the closure of
/// the hornified surface minus the sub-triangle.
SampledSurface sub_triangle_complement(const SampledSurface& x, int j1, int j2);

/// Largest pair ratio (either way) between 4-space distances and their
/// orthogonal projections onto the plane spanned by the knot tangent at
/// delta(theta) and the axis direction. Throws DegeneratePlane when the
/// tangent is parallel to the axis.
double projection_distortion(const SampledSurface& t, const KnotCurve& knot, double theta,
                             const AxisLine& ell);

struct BuildOptions {
  double eta = 0.2;
  int scan_resolution = 720;      // theta scan for the simple-arc window
  double distortion_bound = 4.0;  // shrink theta2 toward theta1 until below
  int glue_resolution = 64;       // angular samples of each glue triangle
  int closing_resolution = 64;    // samples along the closing geodesic
  double exit_margin = 0.05;      // arc length past the tube exit
  SimplicityOptions simplicity;
};

/// The assembled data of the universality construction for one knot and
/// exponent: the hornified body with a simple window excised, two planar
/// glue triangles inside the orbit planes, and the closing cone kept as a
/// separate piece.
struct UniversalTriangle {
  double beta = 0.0;
  std::string knot_name;
  double theta1 = 0.0, theta2 = 0.0;  // excised window (grid aligned)
  int j1 = 0, j2 = 0;                 // window column indices
  double x1 = 0.0, x2 = 0.0;          // arc-length positions of the outer rays
  double tube_angle = 0.0;            // boundary angle of the horn tube section
  double body_length_unit = 0.0;      // slice length of the body at scale 1
  double tau_angle1_deg = 0.0;        // measured crossing angles of the closing
  double tau_angle2_deg = 0.0;        // geodesic against the two rays
  Vec4 axis_dir;                      // the axis the construction hangs on
  Vec4 v1, v2;                        // transverse directions of the orbit planes
  SampledSurface body;     // hornified knot minus the open window
  SampledSurface glue1;    // T(gamma_theta1, l1), planar
  SampledSurface glue2;    // T(gamma_theta2, l2), planar
  SampledSurface closing;  // cone over the outer geodesic

  SurfaceSet triangle_set() const { return {&body, &glue1, &glue2}; }
  SurfaceSet closed_set() const { return {&body, &glue1, &glue2, &closing}; }

  /// Closed link of the union at ladder index k; without the closing cone
  /// the link is an open arc.
  LinkCurve union_link(int k, bool include_closing = true) const;

  /// Closed spherical triangle traced by the two full glue spokes and the
  /// closing geodesic: the link of the tangent cone of the union.
  LinkCurve tangent_link(int samples_per_arc = 64) const;
};

UniversalTriangle build_universal_triangle(const KnotCurve& knot, const AxisLine& ell,
                                           double beta, const std::vector<double>& ladder,
                                           const BuildOptions& opts = {});

/// The distinguishing pair: the closed universality surface (link isotopic
/// to the knot at every scale, tangent cone a flat triangle) against the
/// plain cone over the knot (its own tangent cone). Outer-equivalent but,
/// for a non-trivial knot, not ambient equivalent.
struct CounterexamplePair {
  UniversalTriangle rerouted;  // Y: body + glue + closing
  SampledSurface cone;         // the cone over the knot
};

CounterexamplePair build_counterexample_pair(const KnotCurve& knot, const AxisLine& ell,
                                             double beta, const std::vector<double>& ladder,
                                             const BuildOptions& opts = {});

/// Simple-window scan support: reports for every theta on a uniform grid.
std::vector<SimplicityReport> scan_simple(const KnotCurve& knot, const AxisLine& ell,
                                          const AxisTube& tube, int resolution,
                                          const SimplicityOptions& opts = {});

}  // namespace mkf
