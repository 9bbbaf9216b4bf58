#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mkf/diagram.hpp"
#include "mkf/surface.hpp"
#include "mkf/vec4.hpp"

namespace mkf {

/// Ordered samples of a scale slice, normalized to the unit sphere.
struct LinkCurve {
  std::vector<Vec4> pts;
  bool closed = false;
  double t = 1.0;  // scale the slice was taken at
};

/// Slice of one surface at ladder index k.
LinkCurve extract_link(const SampledSurface& s, int k);

/// Stitches ordered slice polylines into one curve by matching endpoints;
/// throws GlueMismatch when consecutive pieces fail to meet within
/// tol * t. Pieces alternate orientation as needed.
LinkCurve stitch_link(std::span<const LinkCurve> pieces, double tol = 1e-6);

struct ProjectOptions {
  int max_retries = 50;
  double min_angle_deg = 2.0;       // crossing angle genericity
  double separation_factor = 3.0;   // crossing separation vs local pitch
  double depth_tol = 1e-9;          // minimal over/under depth difference
  int raw_crossing_cap = 256;       // reject absurd projections early
};

/// Stereographic projection from the sphere point farthest from the curve,
/// followed by an orthogonal projection onto a seeded random plane;
/// segment-pair crossings become diagram crossings with over/under read
/// off the depth coordinate. Retries with a new direction on any
/// genericity failure (tangency, near-triple point, depth tie).
KnotDiagram project_to_diagram(const LinkCurve& curve, std::uint64_t seed,
                               const ProjectOptions& opts = {});

}  // namespace mkf
