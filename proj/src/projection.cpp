#include "mkf/projection.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "mkf/errors.hpp"

namespace mkf {

LinkCurve extract_link(const SampledSurface& s, int k) {
  if (k < 0 || k >= s.n_scales()) fail(Err::EmptySlice, "scale index outside the ladder");
  LinkCurve c;
  c.t = s.ladder[static_cast<std::size_t>(k)];
  c.closed = s.theta_wraps;
  double inv = 1.0 / c.t;
  c.pts.reserve(static_cast<std::size_t>(s.n_theta));
  for (const Vec4& p : s.slice(k)) c.pts.push_back(inv * p);
  return c;
}

LinkCurve stitch_link(std::span<const LinkCurve> pieces, double tol) {
  if (pieces.empty()) fail(Err::EmptySlice, "no pieces to stitch");
  LinkCurve out;
  out.t = pieces.front().t;
  std::deque<Vec4> chain(pieces.front().pts.begin(), pieces.front().pts.end());
  std::vector<bool> used(pieces.size(), false);
  used[0] = true;
  for (std::size_t round = 1; round < pieces.size(); ++round) {
    bool attached = false;
    for (std::size_t i = 0; i < pieces.size() && !attached; ++i) {
      if (used[i]) continue;
      std::vector<Vec4> next = pieces[i].pts;
      for (int rev = 0; rev < 2 && !attached; ++rev) {
        if (rev) std::reverse(next.begin(), next.end());
        if (distance(chain.back(), next.front()) <= tol) {
          chain.insert(chain.end(), next.begin() + 1, next.end());
          attached = true;
        } else if (distance(chain.front(), next.back()) <= tol) {
          chain.insert(chain.begin(), next.begin(), next.end() - 1);
          attached = true;
        }
      }
      if (attached) used[i] = true;
    }
    if (!attached) fail(Err::GlueMismatch, "link pieces do not meet within tolerance");
  }
  double gap = distance(chain.front(), chain.back());
  if (gap <= tol) {
    chain.pop_back();
    out.closed = true;
  } else {
    out.closed = false;
  }
  out.pts.assign(chain.begin(), chain.end());
  return out;
}

namespace {

struct Proj {
  std::vector<std::array<double, 2>> xy;
  std::vector<double> depth;
};

struct RawCrossing {
  int seg_over, seg_under;      // segment indices along the curve
  double par_over, par_under;   // position within each segment, (0,1)
  std::array<double, 2> at;     // 2-D crossing point
  int sign;
  double local_res;             // max segment length at this crossing
};

Vec4 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  while (true) {
    Vec4 v{g(rng), g(rng), g(rng), g(rng)};
    double n = norm(v);
    if (n > 1e-3) return v / n;
  }
}

Vec4 farthest_pole(const std::vector<Vec4>& pts, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  Vec4 best;
  double best_d = -1.0;
  for (int c = 0; c < 512; ++c) {
    Vec4 cand = random_unit(rng);
    double d = std::numeric_limits<double>::infinity();
    for (const Vec4& p : pts) d = std::min(d, distance(cand, p));
    if (d > best_d) {
      best_d = d;
      best = cand;
    }
  }
  return best;
}

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

// proper interior intersection of segments p1p2 and q1q2; fills s, u in (0,1)
bool seg_intersect(const std::array<double, 2>& p1, const std::array<double, 2>& p2,
                   const std::array<double, 2>& q1, const std::array<double, 2>& q2,
                   double* s, double* u) {
  double rx = p2[0] - p1[0], ry = p2[1] - p1[1];
  double tx = q2[0] - q1[0], ty = q2[1] - q1[1];
  double den = rx * ty - ry * tx;
  if (den == 0.0) return false;
  double qpx = q1[0] - p1[0], qpy = q1[1] - p1[1];
  *s = (qpx * ty - qpy * tx) / den;
  *u = (qpx * ry - qpy * rx) / den;
  return *s > 0.0 && *s < 1.0 && *u > 0.0 && *u < 1.0;
}

}  // namespace

KnotDiagram project_to_diagram(const LinkCurve& curve, std::uint64_t seed,
                               const ProjectOptions& opts) {
  if (!curve.closed) fail(Err::OpenCurve, "diagram projection needs a closed curve");

  // drop consecutive duplicates
  std::vector<Vec4> pts;
  for (const Vec4& p : curve.pts)
    if (pts.empty() || distance(pts.back(), p) > 1e-14) pts.push_back(p);
  while (pts.size() > 1 && distance(pts.front(), pts.back()) <= 1e-14) pts.pop_back();
  const int n = static_cast<int>(pts.size());
  if (n < 3) fail(Err::OpenCurve, "degenerate curve");

  Vec4 pole = farthest_pole(pts, seed);
  // orthonormal frame of the chart hyperplane; orientation pinned so the
  // chart never mirrors the curve (otherwise the chirality of the diagram
  // would depend on the pole pick)
  Vec4 frame[3];
  {
    int have = 0;
    for (int i = 0; i < 4 && have < 3; ++i) {
      Vec4 cand = reject(basis4(i), pole);
      for (int j = 0; j < have; ++j) cand = reject(cand, frame[j]);
      double nn = norm(cand);
      if (nn > 1e-6) frame[have++] = cand / nn;
    }
    double det = det4(pole, frame[0], frame[1], frame[2]);
    if (det < 0.0) frame[2] = -frame[2];
  }
  std::vector<std::array<double, 3>> space(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec4& x = pts[static_cast<std::size_t>(i)];
    double denom = 1.0 - dot(x, pole);
    Vec4 y = (x - dot(x, pole) * pole) / denom;
    space[static_cast<std::size_t>(i)] = {dot(y, frame[0]), dot(y, frame[1]),
                                          dot(y, frame[2])};
  }

  std::mt19937_64 rng(seed);
  std::string why = "no attempt made";
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    // seeded random orthonormal 3-frame: view plane (u, v), depth w
    std::normal_distribution<double> g;
    std::array<double, 3> u{g(rng), g(rng), g(rng)};
    std::array<double, 3> v{g(rng), g(rng), g(rng)};
    auto dot3 = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
      return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    };
    double un = std::sqrt(dot3(u, u));
    if (un < 1e-6) continue;
    for (double& c : u) c /= un;
    double uv = dot3(v, u);
    for (int i = 0; i < 3; ++i) v[static_cast<std::size_t>(i)] -= uv * u[static_cast<std::size_t>(i)];
    double vn = std::sqrt(dot3(v, v));
    if (vn < 1e-6) continue;
    for (double& c : v) c /= vn;
    std::array<double, 3> w{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                            u[0] * v[1] - u[1] * v[0]};

    Proj pr;
    pr.xy.resize(static_cast<std::size_t>(n));
    pr.depth.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      pr.xy[static_cast<std::size_t>(i)] = {dot3(space[static_cast<std::size_t>(i)], u),
                                            dot3(space[static_cast<std::size_t>(i)], v)};
      pr.depth[static_cast<std::size_t>(i)] = dot3(space[static_cast<std::size_t>(i)], w);
    }

    auto seg_len = [&](int i) {
      int j = (i + 1) % n;
      double dx = pr.xy[static_cast<std::size_t>(j)][0] - pr.xy[static_cast<std::size_t>(i)][0];
      double dy = pr.xy[static_cast<std::size_t>(j)][1] - pr.xy[static_cast<std::size_t>(i)][1];
      return std::sqrt(dx * dx + dy * dy);
    };

    std::vector<RawCrossing> raw;
    bool ok = true;
    why.clear();
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 2; j < n && ok; ++j) {
        if (i == 0 && j == n - 1) continue;  // wrap-adjacent
        double s, t2;
        if (!seg_intersect(pr.xy[static_cast<std::size_t>(i)],
                           pr.xy[static_cast<std::size_t>((i + 1) % n)],
                           pr.xy[static_cast<std::size_t>(j)],
                           pr.xy[static_cast<std::size_t>((j + 1) % n)], &s, &t2))
          continue;
        // genericity: crossing angle
        auto dir = [&](int a) {
          int b = (a + 1) % n;
          double dx = pr.xy[static_cast<std::size_t>(b)][0] -
                      pr.xy[static_cast<std::size_t>(a)][0];
          double dy = pr.xy[static_cast<std::size_t>(b)][1] -
                      pr.xy[static_cast<std::size_t>(a)][1];
          double l = std::sqrt(dx * dx + dy * dy);
          return std::array<double, 2>{dx / l, dy / l};
        };
        std::array<double, 2> di = dir(i), dj = dir(j);
        double cross = di[0] * dj[1] - di[1] * dj[0];
        double angle = std::asin(std::min(1.0, std::fabs(cross))) * 180.0 / M_PI;
        if (angle < opts.min_angle_deg) {
          ok = false;
          why = "near-tangent crossing";
          break;
        }
        double depth_i = pr.depth[static_cast<std::size_t>(i)] +
                         s * (pr.depth[static_cast<std::size_t>((i + 1) % n)] -
                              pr.depth[static_cast<std::size_t>(i)]);
        double depth_j = pr.depth[static_cast<std::size_t>(j)] +
                         t2 * (pr.depth[static_cast<std::size_t>((j + 1) % n)] -
                               pr.depth[static_cast<std::size_t>(j)]);
        if (std::fabs(depth_i - depth_j) < opts.depth_tol * std::max(seg_len(i), seg_len(j))) {
          ok = false;
          why = "depth tie at a crossing";
          break;
        }
        RawCrossing rc;
        bool i_over = depth_i > depth_j;
        rc.seg_over = i_over ? i : j;
        rc.seg_under = i_over ? j : i;
        rc.par_over = i_over ? s : t2;
        rc.par_under = i_over ? t2 : s;
        rc.at = {pr.xy[static_cast<std::size_t>(i)][0] +
                     s * (pr.xy[static_cast<std::size_t>((i + 1) % n)][0] -
                          pr.xy[static_cast<std::size_t>(i)][0]),
                 pr.xy[static_cast<std::size_t>(i)][1] +
                     s * (pr.xy[static_cast<std::size_t>((i + 1) % n)][1] -
                          pr.xy[static_cast<std::size_t>(i)][1])};
        // sign: +1 when the under direction is ccw from the over direction
        std::array<double, 2> d_over = i_over ? di : dj;
        std::array<double, 2> d_under = i_over ? dj : di;
        rc.sign = (d_over[0] * d_under[1] - d_over[1] * d_under[0]) > 0 ? 1 : -1;
        rc.local_res = std::max(seg_len(i), seg_len(j));
        raw.push_back(rc);
        if (static_cast<int>(raw.size()) > opts.raw_crossing_cap) {
          ok = false;
          why = "crossing count blew up";
        }
      }
    }
    if (!ok) continue;

    // genericity: distinct crossings must keep apart at the local scale
    for (std::size_t a = 0; a < raw.size() && ok; ++a)
      for (std::size_t b = a + 1; b < raw.size() && ok; ++b) {
        double dx = raw[a].at[0] - raw[b].at[0];
        double dy = raw[a].at[1] - raw[b].at[1];
        double d = std::sqrt(dx * dx + dy * dy);
        if (d < opts.separation_factor * std::min(raw[a].local_res, raw[b].local_res)) {
          ok = false;
          why = "crossings too close (near triple point)";
        }
      }
    if (!ok) continue;

    // order crossing passes along the curve; arcs get consecutive labels
    struct Event {
      double pos;  // seg + par
      int crossing;
      bool is_over;
    };
    std::vector<Event> events;
    for (std::size_t c = 0; c < raw.size(); ++c) {
      events.push_back({raw[c].seg_over + raw[c].par_over, static_cast<int>(c), true});
      events.push_back({raw[c].seg_under + raw[c].par_under, static_cast<int>(c), false});
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.pos < b.pos; });
    const int two_n = static_cast<int>(events.size());
    std::vector<int> over_in(raw.size()), over_out(raw.size()), under_in(raw.size()),
        under_out(raw.size());
    for (int q = 0; q < two_n; ++q) {
      const Event& e = events[static_cast<std::size_t>(q)];
      int in_arc = (q - 1 + two_n) % two_n;
      int out_arc = q;
      if (e.is_over) {
        over_in[static_cast<std::size_t>(e.crossing)] = in_arc;
        over_out[static_cast<std::size_t>(e.crossing)] = out_arc;
      } else {
        under_in[static_cast<std::size_t>(e.crossing)] = in_arc;
        under_out[static_cast<std::size_t>(e.crossing)] = out_arc;
      }
    }
    KnotDiagram d;
    for (std::size_t c = 0; c < raw.size(); ++c) {
      Crossing x;
      x.sign = raw[c].sign;
      x.a = under_in[c];
      x.c = under_out[c];
      if (x.sign > 0) {
        x.b = over_out[c];
        x.d = over_in[c];
      } else {
        x.b = over_in[c];
        x.d = over_out[c];
      }
      d.crossings.push_back(x);
    }
    validate_diagram(d);
    return d;
  }
  fail(Err::GenericityFailure,
       "no generic projection after " + std::to_string(opts.max_retries) +
           " attempts: " + why);
}

}  // namespace mkf
