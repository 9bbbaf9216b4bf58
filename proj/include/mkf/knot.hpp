#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mkf/geometry.hpp"
#include "mkf/vec4.hpp"

namespace mkf {

/// Smooth closed curve on the unit 3-sphere, sampled at m parameters.
/// min_self_distance is the discrete doubly-critical self distance of the
/// samples (closest approach between distinct strands; for a round circle
/// it equals the diameter).
struct KnotCurve {
  std::string name;
  std::function<Vec4(double)> delta;  // [0, 2pi] -> S^3, delta(0) = delta(2pi)
  std::vector<Vec4> samples;
  int m = 0;
  double min_self_distance = 0.0;
  double scale = 1.0;     // homothety applied before the sphere chart
  bool trivial = false;   // unknot preset

  Vec4 sample(int j) const { return samples[static_cast<std::size_t>(j)]; }
  double param(int j) const { return 2.0 * M_PI * j / m; }
};

/// Curve in R^3 with image inside the unit ball (used by the presets).
using SpaceCurve = std::function<std::array<double, 3>(double)>;

/// Chart sending R^3 to S^3 with 0 at the pole: the inverse stereographic
/// projection from the pole's antipode, expressed in an orthonormal frame
/// of the pole's orthogonal complement.
struct SphereChart {
  Vec4 pole;
  Vec4 f1, f2, f3;

  explicit SphereChart(const Vec4& pole_unit);
  Vec4 to_sphere(const std::array<double, 3>& u) const;
  std::array<double, 3> from_sphere(const Vec4& x) const;  // pole's antipode excluded
};

struct KnotOptions {
  int m = 512;
  double eta = 0.2;
  /// 0 = pick automatically: the largest dyadic scale that keeps the curve
  /// inside the horn neighborhood with margin and keeps the spherical
  /// length below length_cap (so coarse-scale inner paths through the
  /// origin never undercut paths along the link).
  double scale = 0.0;
  double tube_margin = 0.9;
  /// Cap on the spherical length. Below 4/3 a dyadic descend-and-return
  /// path can never undercut a path along the link, so per-scale inner
  /// metric constants stay flat from the coarsest scale on.
  double length_cap = 1.3;
  double embed_factor = 1.5;  // SelfIntersection below embed_factor * mean pitch
};

/// Builds a named preset ("unknot", "torus-p-q", "figure-eight") as a
/// curve on S^3 near the axis pole. Validates unit norms, closure,
/// embeddedness and horn-neighborhood membership.
KnotCurve make_preset_knot(const std::string& kind, const AxisLine& ell,
                           const KnotOptions& opts = {});

/// Wraps user-supplied S^3 samples (closed, ordered) with the same
/// validation as the presets. The callable form is reconstructed by
/// piecewise great-circle interpolation.
KnotCurve make_knot_from_samples(std::string name, std::vector<Vec4> samples,
                                 const KnotOptions& opts = {});

/// Minor great-circle arc between two non-antipodal points of S^3,
/// parametrized by arc length.
struct SphericalGeodesic {
  Vec4 a, b;
  Vec4 ortho;    // unit, orthogonal to a, in span(a, b)
  double angle;  // arc length of the minor arc

  Vec4 at(double s) const { return std::cos(s) * a + std::sin(s) * ortho; }
  Vec4 point_at_fraction(double f) const { return at(f * angle); }
  double length() const { return angle; }
};

SphericalGeodesic geodesic_between(const Vec4& a, const Vec4& b);

// ---- simple arcs -------------------------------------------------------------

struct GeodesicKnotHit {
  double s;          // parameter on the great circle, in [0, 2pi)
  double u;          // knot parameter of the hit
  double angle_deg;  // crossing angle between the two tangents
};

/// Transversality and boundary-crossing report for the great circle
/// through ell(1) and delta(theta). The circle is parametrized by arc
/// length from ell(1); hits with the knot are listed in circle order.
/// crossings_after counts tube-boundary crossings strictly between the hit
/// at delta(theta) and the next knot hit (wrapping to 2pi), and
/// crossings_before the analogous count for the preceding interval; both
/// are reported because the indexing convention at the last hit is
/// ambiguous. simple = transversal && crossings_after == 2.
struct SimplicityReport {
  double theta = 0.0;
  bool simple = false;
  bool transversal = false;
  std::vector<GeodesicKnotHit> hits;
  int k_index = -1;        // index in hits of the hit at delta(theta)
  double u_exit = 0.0;     // tube boundary crossing going out
  double v_entry = 0.0;    // tube boundary crossing coming back
  int crossings_after = 0;
  int crossings_before = 0;
};

struct SimplicityOptions {
  double min_angle_deg = 5.0;
  double hit_tol_factor = 2.0;  // hit tube radius = factor * sample spacing
};

SimplicityReport is_simple(double theta, const KnotCurve& knot, const AxisLine& ell,
                           const AxisTube& tube, const SimplicityOptions& opts = {});

}  // namespace mkf
