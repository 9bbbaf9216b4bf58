#pragma once

#include <functional>
#include <vector>

#include "mkf/errors.hpp"
#include "mkf/vec4.hpp"

namespace mkf {

/// Curve germ parametrized by distance to the origin: ||eval(t)|| = t.
struct Arc {
  std::function<Vec4(double)> eval;
  double t0 = 1.0;  // domain is (0, t0]
};

/// An arc evaluated on a scale ladder (t strictly decreasing).
struct ArcSamples {
  std::vector<double> ts;
  std::vector<Vec4> pts;

  std::size_t size() const { return ts.size(); }
};

inline ArcSamples sample_arc(const Arc& arc, const std::vector<double>& ladder) {
  ArcSamples out;
  out.ts = ladder;
  out.pts.reserve(ladder.size());
  for (double t : ladder) out.pts.push_back(arc.eval(t));
  return out;
}

/// Dyadic ladder t_k = base^(-k), k = 0..depth.
inline std::vector<double> dyadic_ladder(int depth, double base = 2.0) {
  if (depth < 0) fail(Err::ConfigInvalid, "ladder depth must be >= 0");
  std::vector<double> t(static_cast<std::size_t>(depth) + 1);
  double v = 1.0;
  for (int k = 0; k <= depth; ++k) {
    t[static_cast<std::size_t>(k)] = v;
    v /= base;
  }
  return t;
}

}  // namespace mkf
