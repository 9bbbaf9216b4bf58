#include "mkf/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <numeric>

#include "mkf/errors.hpp"

namespace mkf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct EdgeAcc {
  std::vector<std::pair<int, int>> e;
  std::vector<double> w;

  void add(int a, int b, double weight) {
    if (a == b) return;
    e.emplace_back(a, b);
    w.push_back(weight);
  }
};

kernels::Csr to_csr(int n, const EdgeAcc& acc) {
  kernels::Csr g;
  g.n = n;
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (auto [a, b] : acc.e) {
    ++deg[static_cast<std::size_t>(a)];
    ++deg[static_cast<std::size_t>(b)];
  }
  g.off.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    g.off[static_cast<std::size_t>(i) + 1] = g.off[static_cast<std::size_t>(i)] +
                                             deg[static_cast<std::size_t>(i)];
  g.to.resize(static_cast<std::size_t>(g.off.back()));
  g.w.resize(g.to.size());
  std::vector<int> cur(g.off.begin(), g.off.end() - 1);
  for (std::size_t i = 0; i < acc.e.size(); ++i) {
    auto [a, b] = acc.e[i];
    g.to[static_cast<std::size_t>(cur[static_cast<std::size_t>(a)])] = b;
    g.w[static_cast<std::size_t>(cur[static_cast<std::size_t>(a)]++)] = acc.w[i];
    g.to[static_cast<std::size_t>(cur[static_cast<std::size_t>(b)])] = a;
    g.w[static_cast<std::size_t>(cur[static_cast<std::size_t>(b)]++)] = acc.w[i];
  }
  return g;
}

}  // namespace

int MetricGraph::node_at(int piece, int j, int k) const {
  int nt = piece_n_theta_[static_cast<std::size_t>(piece)];
  return grid_to_node_[static_cast<std::size_t>(piece)][static_cast<std::size_t>(k * nt + j)];
}

MetricGraph build_metric_graph(const SampledSurface& s, const GraphOptions& opts) {
  return build_metric_graph(SurfaceSet{&s}, opts);
}

MetricGraph build_metric_graph(const SurfaceSet& set, const GraphOptions& opts) {
  if (set.pieces.empty()) fail(Err::EmptySet, "no surfaces to build a graph from");
  const std::vector<double>& ladder = set.pieces.front()->ladder;
  for (const SampledSurface* s : set.pieces)
    if (s->ladder != ladder) fail(Err::GlueMismatch, "pieces must share one scale ladder");
  const int n_scales = static_cast<int>(ladder.size());

  MetricGraph g;
  g.ladder = ladder;
  g.piece_n_theta_.reserve(set.pieces.size());

  // Deduplicate coincident samples (seams between glued pieces) per scale.
  struct Key {
    long long a, b, c, d;
    bool operator<(const Key& o) const {
      return std::tie(a, b, c, d) < std::tie(o.a, o.b, o.c, o.d);
    }
  };
  g.slice_nodes.resize(static_cast<std::size_t>(n_scales));
  std::vector<std::map<Key, int>> seen(static_cast<std::size_t>(n_scales));
  for (std::size_t p = 0; p < set.pieces.size(); ++p) {
    const SampledSurface& s = *set.pieces[p];
    g.piece_n_theta_.push_back(s.n_theta);
    std::vector<int> map(static_cast<std::size_t>(s.size()), -1);
    for (int k = 0; k < n_scales; ++k) {
      double q = opts.merge_tol * ladder[static_cast<std::size_t>(k)];
      for (int j = 0; j < s.n_theta; ++j) {
        const Vec4& pt = s.at(j, k);
        Key key{static_cast<long long>(std::floor(pt[0] / q)),
                static_cast<long long>(std::floor(pt[1] / q)),
                static_cast<long long>(std::floor(pt[2] / q)),
                static_cast<long long>(std::floor(pt[3] / q))};
        auto it = seen[static_cast<std::size_t>(k)].find(key);
        int id;
        if (it != seen[static_cast<std::size_t>(k)].end() &&
            distance(g.node_pts[static_cast<std::size_t>(it->second)], pt) <= q) {
          id = it->second;
        } else {
          id = static_cast<int>(g.node_pts.size());
          g.node_pts.push_back(pt);
          g.node_piece.push_back(static_cast<int>(p));
          g.node_theta.push_back(j);
          g.node_scale.push_back(k);
          g.node_tagged.push_back(!s.theta_tags.empty() &&
                                  !s.theta_tags[static_cast<std::size_t>(j)].empty());
          g.slice_nodes[static_cast<std::size_t>(k)].push_back(id);
          seen[static_cast<std::size_t>(k)][key] = id;
        }
        map[static_cast<std::size_t>(s.idx(j, k))] = id;
      }
    }
    g.grid_to_node_.push_back(std::move(map));
  }

  EdgeAcc acc;
  auto node = [&](std::size_t p, int j, int k) {
    const SampledSurface& s = *set.pieces[p];
    return g.grid_to_node_[p][static_cast<std::size_t>(s.idx(j, k))];
  };
  for (std::size_t p = 0; p < set.pieces.size(); ++p) {
    const SampledSurface& s = *set.pieces[p];
    int ring_last = s.theta_wraps ? s.n_theta : s.n_theta - 1;
    for (int k = 0; k < n_scales; ++k) {
      if (opts.ring_edges)
        for (int j = 0; j < ring_last; ++j) {
          int jn = (j + 1) % s.n_theta;
          acc.add(node(p, j, k), node(p, jn, k), distance(s.at(j, k), s.at(jn, k)));
        }
      if (k + 1 < n_scales) {
        for (int j = 0; j < s.n_theta; ++j) {
          if (opts.radial_edges)
            acc.add(node(p, j, k), node(p, j, k + 1), distance(s.at(j, k), s.at(j, k + 1)));
          if (opts.diagonal_edges) {
            int jn = (j + 1) % s.n_theta;
            if (jn != j && (s.theta_wraps || j + 1 < s.n_theta)) {
              acc.add(node(p, j, k), node(p, jn, k + 1), distance(s.at(j, k), s.at(jn, k + 1)));
              acc.add(node(p, jn, k), node(p, j, k + 1), distance(s.at(jn, k), s.at(j, k + 1)));
            }
          }
        }
      }
    }
  }

  // k-NN enrichment inside each slice, gated by the local pitch so strands
  // that merely pass close to each other are not short-circuited, and
  // restricted to one piece: distinct sheets can run arbitrarily close
  // without sharing any surface between them.
  if (opts.knn > 0) {
    for (int k = 0; k < n_scales; ++k) {
      const std::vector<int>& nodes = g.slice_nodes[static_cast<std::size_t>(k)];
      const int m = static_cast<int>(nodes.size());
      if (m < 3) continue;
      // local pitch per node: max incident ring-edge length (approx by
      // nearest neighbor distance when rings are off)
      std::vector<double> local(static_cast<std::size_t>(m), 0.0);
      for (int a = 0; a < m; ++a) {
        double nn = kInf;
        for (int b = 0; b < m; ++b) {
          if (a == b) continue;
          nn = std::min(nn, distance(g.node_pts[static_cast<std::size_t>(nodes[a])],
                                     g.node_pts[static_cast<std::size_t>(nodes[b])]));
        }
        local[static_cast<std::size_t>(a)] = nn;
      }
      for (int a = 0; a < m; ++a) {
        std::vector<std::pair<double, int>> cand;
        cand.reserve(static_cast<std::size_t>(m) - 1);
        for (int b = 0; b < m; ++b) {
          if (a == b) continue;
          if (g.node_piece[static_cast<std::size_t>(nodes[a])] !=
              g.node_piece[static_cast<std::size_t>(nodes[b])])
            continue;
          cand.emplace_back(distance(g.node_pts[static_cast<std::size_t>(nodes[a])],
                                     g.node_pts[static_cast<std::size_t>(nodes[b])]),
                            nodes[static_cast<std::size_t>(b)]);
        }
        if (cand.empty()) continue;
        int take = std::min<int>(opts.knn, static_cast<int>(cand.size()));
        std::partial_sort(cand.begin(), cand.begin() + take, cand.end());
        double radius = opts.knn_radius_factor * local[static_cast<std::size_t>(a)];
        for (int i = 0; i < take; ++i)
          if (cand[static_cast<std::size_t>(i)].first <= radius)
            acc.add(nodes[static_cast<std::size_t>(a)],
                    cand[static_cast<std::size_t>(i)].second,
                    cand[static_cast<std::size_t>(i)].first);
      }
    }
  }

  if (opts.origin_node) {
    g.origin = static_cast<int>(g.node_pts.size());
    g.node_pts.push_back(Vec4{});
    g.node_piece.push_back(-1);
    g.node_theta.push_back(-1);
    g.node_scale.push_back(-1);
    g.node_tagged.push_back(false);
    double t_fin = ladder.back();
    for (int id : g.slice_nodes.back()) acc.add(g.origin, id, t_fin);
  }

  g.csr = to_csr(static_cast<int>(g.node_pts.size()), acc);

  double pitch = 0.0;
  for (const SampledSurface* s : set.pieces) pitch = std::max(pitch, s->link_pitch());
  g.pitch = pitch;
  return g;
}

double inner_distance(const MetricGraph& g, int i, int j) {
  if (i == j) return 0.0;
  std::vector<double> dist = kernels::dijkstra(g.csr, i);
  double d = dist[static_cast<std::size_t>(j)];
  if (!std::isfinite(d)) fail(Err::Disconnected, "nodes lie in different components");
  return d;
}

namespace {

// Farthest-point subsample of a slice, seeded at the first node.
std::vector<int> fps_subsample(const MetricGraph& g, const std::vector<int>& nodes, int cap) {
  if (static_cast<int>(nodes.size()) <= cap) return nodes;
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(cap));
  std::vector<double> best(nodes.size(), kInf);
  int cur = 0;
  chosen.push_back(nodes[0]);
  for (int round = 1; round < cap; ++round) {
    double far_d = -1.0;
    int far_i = -1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double d = distance(g.node_pts[static_cast<std::size_t>(nodes[i])],
                          g.node_pts[static_cast<std::size_t>(nodes[static_cast<std::size_t>(cur)])]);
      best[i] = std::min(best[i], d);
      if (best[i] > far_d) {
        far_d = best[i];
        far_i = static_cast<int>(i);
      }
    }
    cur = far_i;
    chosen.push_back(nodes[static_cast<std::size_t>(far_i)]);
  }
  return chosen;
}

}  // namespace

double lne_constant_per_scale(const MetricGraph& g, int k, int pair_cap, int* pairs_checked) {
  const std::vector<int>& slice = g.slice_nodes[static_cast<std::size_t>(k)];
  if (slice.empty()) fail(Err::EmptySlice, "no samples at the requested scale");
  std::vector<int> sources = fps_subsample(g, slice, pair_cap);
  if (static_cast<int>(slice.size()) > pair_cap) {
    // boundary-tagged columns always stay in the source set
    std::set<int> keep(sources.begin(), sources.end());
    for (int id : slice)
      if (g.node_tagged[static_cast<std::size_t>(id)]) keep.insert(id);
    sources.assign(keep.begin(), keep.end());
  }
  if (pairs_checked)
    *pairs_checked = static_cast<int>(sources.size()) * (static_cast<int>(slice.size()) - 1);
  return kernels::max_inner_outer_ratio(g.csr, g.node_pts, sources, slice);
}

LneReport lne_verdict(const MetricGraph& g, double uniformity_bound, int pair_cap) {
  if (g.ladder.size() < 6)
    fail(Err::ConfigInvalid, "LNE verdict needs a ladder with at least 6 scales");
  LneReport rep;
  rep.bound = uniformity_bound;
  double cmin = kInf, cmax = 0.0;
  for (int k = 0; k < static_cast<int>(g.ladder.size()); ++k) {
    ScaleLne row;
    row.t = g.ladder[static_cast<std::size_t>(k)];
    row.c = lne_constant_per_scale(g, k, pair_cap, &row.pairs_checked);
    cmin = std::min(cmin, row.c);
    cmax = std::max(cmax, row.c);
    rep.per_scale.push_back(row);
  }
  rep.c_sup = cmax;
  rep.uniformity = cmax / cmin;
  rep.lne_consistent = rep.uniformity <= uniformity_bound;
  return rep;
}

namespace {

TordEstimate fit_loglog(const std::vector<double>& ts, const std::vector<double>& ds) {
  TordEstimate est;
  // finest half of the ladder
  std::size_t n = ts.size();
  std::size_t start = n / 2;
  for (std::size_t i = start; i < n; ++i) {
    if (ds[i] == 0.0) {
      est.identical = true;
      est.exponent = kInf;
      return est;
    }
    est.fit_t.push_back(ts[i]);
    est.fit_d.push_back(ds[i]);
  }
  std::size_t m = est.fit_t.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::log(est.fit_t[i]);
    double y = std::log(est.fit_d[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double dm = static_cast<double>(m);
  double vx = sxx - sx * sx / dm;
  double vy = syy - sy * sy / dm;
  double cxy = sxy - sx * sy / dm;
  est.exponent = cxy / vx;
  est.coeff = std::exp((sy - est.exponent * sx) / dm);
  est.r_squared = (vy == 0.0) ? 1.0 : (cxy * cxy) / (vx * vy);
  return est;
}

}  // namespace

TordEstimate estimate_tord(const ArcSamples& a, const ArcSamples& b) {
  if (a.ts != b.ts) fail(Err::ConfigInvalid, "arcs must be sampled on the same ladder");
  std::vector<double> ds(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) ds[i] = distance(a.pts[i], b.pts[i]);
  return fit_loglog(a.ts, ds);
}

TordEstimate estimate_tord_inner(const MetricGraph& g, int piece_a, int ja, int piece_b,
                                 int jb) {
  std::size_t n = g.ladder.size();
  std::vector<double> ds(n, 0.0);
  for (std::size_t k = n / 2; k < n; ++k) {
    int u = g.node_at(piece_a, ja, static_cast<int>(k));
    int v = g.node_at(piece_b, jb, static_cast<int>(k));
    ds[k] = (u == v) ? 0.0 : inner_distance(g, u, v);
  }
  TordEstimate est = fit_loglog(g.ladder, ds);
  est.metric = TordMetric::Inner;
  return est;
}

double hausdorff_distance(std::span<const Vec4> a, std::span<const Vec4> b) {
  if (a.empty() || b.empty()) fail(Err::EmptySet, "Hausdorff distance of an empty set");
  return std::max(kernels::directed_hausdorff(a, b), kernels::directed_hausdorff(b, a));
}

namespace {

std::vector<Vec4> rescaled_slice(const SurfaceSet& set, int k) {
  std::vector<Vec4> out;
  for (const SampledSurface* s : set.pieces) {
    double inv = 1.0 / s->ladder[static_cast<std::size_t>(k)];
    for (const Vec4& p : s->slice(k)) out.push_back(inv * p);
  }
  return out;
}

}  // namespace

ConeReport estimate_tangent_cone(const SurfaceSet& set, std::span<const Vec4> candidate,
                                 std::optional<double> tol) {
  if (set.pieces.empty()) fail(Err::EmptySet, "tangent cone of nothing");
  const std::vector<double>& ladder = set.pieces.front()->ladder;
  if (ladder.size() < 6)
    fail(Err::ConfigInvalid, "tangent cone estimate needs a ladder with at least 6 scales");
  ConeReport rep;
  double pitch = 0.0;
  for (const SampledSurface* s : set.pieces) pitch = std::max(pitch, s->link_pitch());
  rep.pitch = pitch;
  double tolerance = tol.value_or(3.0 * pitch);

  std::vector<Vec4> prev;
  for (int k = 0; k < static_cast<int>(ladder.size()); ++k) {
    std::vector<Vec4> cur = rescaled_slice(set, k);
    rep.t.push_back(ladder[static_cast<std::size_t>(k)]);
    if (k > 0) rep.consecutive.push_back(hausdorff_distance(prev, cur));
    if (!candidate.empty()) rep.to_candidate.push_back(hausdorff_distance(cur, candidate));
    prev = std::move(cur);
  }
  if (!candidate.empty()) {
    // monotone up to the sampling floor: fluctuations below the tolerance
    // are discretization artifacts, not divergence
    bool mono = true;
    for (std::size_t i = 1; i < rep.to_candidate.size(); ++i)
      if (rep.to_candidate[i] > rep.to_candidate[i - 1] + tolerance) mono = false;
    rep.converged = mono && rep.to_candidate.back() <= tolerance;
  } else {
    rep.converged = !rep.consecutive.empty() && rep.consecutive.back() <= tolerance;
  }
  return rep;
}

ConeReport estimate_tangent_cone(const SampledSurface& s, std::span<const Vec4> candidate,
                                 std::optional<double> tol) {
  return estimate_tangent_cone(SurfaceSet{&s}, candidate, tol);
}

}  // namespace mkf
