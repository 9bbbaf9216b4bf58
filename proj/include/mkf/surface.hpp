#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mkf/arc.hpp"
#include "mkf/vec4.hpp"

namespace mkf {

/// Surface germ sampled on a (theta, t) grid over a decreasing scale ladder.
///
/// Points are stored slice-major: index(j, k) = k * n_theta + j, so the
/// scale-t_k slice is contiguous. Each grid node satisfies ||p(j,k)|| = t_k
/// (arcs are parametrized by distance to the origin). theta_tags carries
/// per-column labels such as boundary arc names.
struct SampledSurface {
  std::string name;
  std::vector<double> ladder;  // t_0 > t_1 > ... > 0
  int n_theta = 0;
  bool theta_wraps = false;  // true when the link is a closed curve
  std::vector<Vec4> pts;
  std::vector<std::string> theta_tags;

  int n_scales() const { return static_cast<int>(ladder.size()); }
  int size() const { return n_theta * n_scales(); }

  int idx(int j, int k) const { return k * n_theta + j; }
  const Vec4& at(int j, int k) const { return pts[static_cast<std::size_t>(idx(j, k))]; }
  Vec4& at(int j, int k) { return pts[static_cast<std::size_t>(idx(j, k))]; }

  std::span<const Vec4> slice(int k) const {
    return {pts.data() + static_cast<std::ptrdiff_t>(k) * n_theta,
            static_cast<std::size_t>(n_theta)};
  }

  ArcSamples arc(int j) const {
    ArcSamples a;
    a.ts = ladder;
    a.pts.reserve(ladder.size());
    for (int k = 0; k < n_scales(); ++k) a.pts.push_back(at(j, k));
    return a;
  }

  /// Max gap between ring-adjacent samples of the 1/t_k-rescaled slice,
  /// over all slices. This is the angular sampling resolution of the
  /// surface and the length unit for convergence tolerances.
  double link_pitch() const;

  void validate() const;  // norm and monotone-ladder invariants
};

double slice_polyline_length(std::span<const Vec4> slice, bool closed);

// ---- serialization ------------------------------------------------------
// CSV columns, in this exact order:
//   idx,theta_idx,t_idx,x0,x1,x2,x3,tags
// "tags" is the theta-column tag (possibly empty). Floats are written with
// %.17g so re-reading reproduces the doubles bit-exactly.

void write_surface_csv(const SampledSurface& s, std::ostream& os);
void write_surface_csv(const SampledSurface& s, const std::string& path);

/// Rebuilds a surface from its CSV plus the grid metadata that the CSV does
/// not carry (ladder values, wrap flag, name).
SampledSurface read_surface_csv(const std::string& path, std::string name,
                                std::vector<double> ladder, bool theta_wraps);

/// 3-D mesh exports; `drop_coord` in 0..3 selects the coordinate removed by
/// the projection. Vertex count equals the grid size; faces are grid quads.
void write_obj(const SampledSurface& s, std::ostream& os, int drop_coord);
void write_ply(const SampledSurface& s, std::ostream& os, int drop_coord);
void write_obj(const SampledSurface& s, const std::string& path, int drop_coord);
void write_ply(const SampledSurface& s, const std::string& path, int drop_coord);

}  // namespace mkf
