#include "mkf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "mkf/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mkf::kernels {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> dijkstra(const Csr& g, int source) {
  std::vector<double> dist(static_cast<std::size_t>(g.n), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(source)] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (int e = g.off[static_cast<std::size_t>(u)]; e < g.off[static_cast<std::size_t>(u) + 1];
         ++e) {
      int v = g.to[static_cast<std::size_t>(e)];
      double nd = d + g.w[static_cast<std::size_t>(e)];
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  return dist;
}

// ---- directed Hausdorff --------------------------------------------------

namespace {

inline double nearest_sq(const Vec4& p, std::span<const Vec4> to) {
  double best = kInf;
  for (const Vec4& q : to) {
    double d = norm_sq(p - q);
    if (d < best) best = d;
  }
  return best;
}

}  // namespace

double ref::directed_hausdorff(std::span<const Vec4> from, std::span<const Vec4> to) {
  double worst = 0.0;
  for (const Vec4& p : from) worst = std::max(worst, nearest_sq(p, to));
  return std::sqrt(worst);
}

double par::directed_hausdorff(std::span<const Vec4> from, std::span<const Vec4> to) {
  double worst = 0.0;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(from.size());
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    worst = std::max(worst, nearest_sq(from[static_cast<std::size_t>(i)], to));
  return std::sqrt(worst);
}

// ---- doubly-critical self distance ---------------------------------------

namespace {

// d(i, .) restricted to indices at circular separation >= min_sep; a pair
// (i, j) counts when the distance is critical in both indices (discrete
// zero of the directional differences). For a round circle the only such
// pairs are antipodal, so the gap equals the diameter.
inline bool critical_dir(std::span<const Vec4> pts, bool closed, int i, int j) {
  const int n = static_cast<int>(pts.size());
  auto d2 = [&](int a, int b) {
    return norm_sq(pts[static_cast<std::size_t>(a)] - pts[static_cast<std::size_t>(b)]);
  };
  int jp = j + 1, jm = j - 1;
  if (closed) {
    jp = (j + 1) % n;
    jm = (j - 1 + n) % n;
  } else if (jp >= n || jm < 0) {
    return true;  // open-curve endpoint counts as critical
  }
  double mid = d2(i, j);
  return (d2(i, jp) - mid) * (mid - d2(i, jm)) <= 0.0;
}

inline double row_gap(std::span<const Vec4> pts, bool closed, int min_sep, int i) {
  const int n = static_cast<int>(pts.size());
  double best = kInf;
  for (int j = i + 1; j < n; ++j) {
    int sep = closed ? std::min(j - i, n - (j - i)) : j - i;
    if (sep < min_sep) continue;
    if (!critical_dir(pts, closed, i, j) || !critical_dir(pts, closed, j, i)) continue;
    best = std::min(best, norm_sq(pts[static_cast<std::size_t>(i)] -
                                  pts[static_cast<std::size_t>(j)]));
  }
  return best;
}

}  // namespace

double ref::min_doubly_critical_gap(std::span<const Vec4> pts, bool closed, int min_sep) {
  double best = kInf;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    best = std::min(best, row_gap(pts, closed, min_sep, i));
  return std::sqrt(best);
}

double par::min_doubly_critical_gap(std::span<const Vec4> pts, bool closed, int min_sep) {
  double best = kInf;
  const int n = static_cast<int>(pts.size());
#pragma omp parallel for schedule(dynamic, 16) reduction(min : best)
  for (int i = 0; i < n; ++i) best = std::min(best, row_gap(pts, closed, min_sep, i));
  return std::sqrt(best);
}

// ---- max inner/outer ratio over slice pairs ------------------------------

namespace {

inline double source_worst_ratio(const Csr& g, std::span<const Vec4> node_pts, int s,
                                 std::span<const int> targets) {
  std::vector<double> dist = dijkstra(g, s);
  double worst = 1.0;
  for (int t : targets) {
    if (t == s) continue;
    double outer = distance(node_pts[static_cast<std::size_t>(s)],
                            node_pts[static_cast<std::size_t>(t)]);
    if (outer <= 0.0) continue;
    double inner = dist[static_cast<std::size_t>(t)];
    if (!std::isfinite(inner)) fail(Err::DisconnectedLink, "slice pair not connected");
    worst = std::max(worst, inner / outer);
  }
  return worst;
}

}  // namespace

double ref::max_inner_outer_ratio(const Csr& g, std::span<const Vec4> node_pts,
                                  std::span<const int> sources, std::span<const int> targets) {
  double worst = 1.0;
  for (int s : sources) worst = std::max(worst, source_worst_ratio(g, node_pts, s, targets));
  return worst;
}

double par::max_inner_outer_ratio(const Csr& g, std::span<const Vec4> node_pts,
                                  std::span<const int> sources, std::span<const int> targets) {
  double worst = 1.0;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(sources.size());
#pragma omp parallel for schedule(dynamic, 1) reduction(max : worst)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    worst = std::max(worst,
                     source_worst_ratio(g, node_pts, sources[static_cast<std::size_t>(i)],
                                        targets));
  return worst;
}

// ---- projection distortion -----------------------------------------------

namespace {

inline double row_distortion(std::span<const Vec4> pts,
                             std::span<const std::array<double, 2>> proj, int i) {
  const int n = static_cast<int>(pts.size());
  double worst = 1.0;
  for (int j = i + 1; j < n; ++j) {
    double d4 = distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
    double dx = proj[static_cast<std::size_t>(i)][0] - proj[static_cast<std::size_t>(j)][0];
    double dy = proj[static_cast<std::size_t>(i)][1] - proj[static_cast<std::size_t>(j)][1];
    double d2 = std::sqrt(dx * dx + dy * dy);
    if (d4 <= 0.0) continue;
    if (d2 <= 0.0) return kInf;
    double r = d2 / d4;
    worst = std::max(worst, std::max(r, 1.0 / r));
  }
  return worst;
}

}  // namespace

double ref::max_projection_distortion(std::span<const Vec4> pts,
                                      std::span<const std::array<double, 2>> proj) {
  double worst = 1.0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    worst = std::max(worst, row_distortion(pts, proj, i));
  return worst;
}

double par::max_projection_distortion(std::span<const Vec4> pts,
                                      std::span<const std::array<double, 2>> proj) {
  double worst = 1.0;
  const int n = static_cast<int>(pts.size());
#pragma omp parallel for schedule(dynamic, 16) reduction(max : worst)
  for (int i = 0; i < n; ++i) worst = std::max(worst, row_distortion(pts, proj, i));
  return worst;
}

// ---- Kauffman bracket state sum -------------------------------------------

int bracket_offset(int n_crossings) { return 3 * n_crossings + 2; }

namespace {

struct LoopCounter {
  std::vector<int> parent;

  explicit LoopCounter(int n) : parent(static_cast<std::size_t>(n)) {}

  void reset() {
    for (int i = 0; i < static_cast<int>(parent.size()); ++i)
      parent[static_cast<std::size_t>(i)] = i;
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

// Accumulates sum over states of A^(#A - #B) * (-A^2 - A^-2)^(loops - 1)
// into a dense exponent table.
void accumulate_states(const BracketInput& in, std::uint64_t first, std::uint64_t last,
                       std::vector<long long>& coeff) {
  const int n = static_cast<int>(in.crossings.size());
  const int offset = bracket_offset(n);
  LoopCounter uf(in.n_arcs);
  std::vector<long long> binom(1, 1);
  for (std::uint64_t state = first; state < last; ++state) {
    uf.reset();
    int joins = 0;
    int exp_a = 0;
    for (int c = 0; c < n; ++c) {
      const auto& x = in.crossings[static_cast<std::size_t>(c)];
      if (state >> c & 1) {  // B smoothing: (0,3) and (1,2)
        --exp_a;
        joins += uf.unite(x[0], x[3]) ? 1 : 0;
        joins += uf.unite(x[1], x[2]) ? 1 : 0;
      } else {  // A smoothing: (0,1) and (2,3)
        ++exp_a;
        joins += uf.unite(x[0], x[1]) ? 1 : 0;
        joins += uf.unite(x[2], x[3]) ? 1 : 0;
      }
    }
    int loops = in.n_arcs - joins + in.extra_loops;
    int L = loops - 1;
    // expand (-A^2 - A^-2)^L = (-1)^L sum_i C(L,i) A^(2L - 4i)
    if (static_cast<int>(binom.size()) < L + 1) binom.resize(static_cast<std::size_t>(L) + 1);
    binom[0] = 1;
    for (int i = 1; i <= L; ++i)
      binom[static_cast<std::size_t>(i)] =
          binom[static_cast<std::size_t>(i) - 1] * (L - i + 1) / i;
    long long sign = (L % 2 == 0) ? 1 : -1;
    for (int i = 0; i <= L; ++i) {
      int e = exp_a + 2 * L - 4 * i;
      coeff[static_cast<std::size_t>(e + offset)] += sign * binom[static_cast<std::size_t>(i)];
    }
  }
}

}  // namespace

std::vector<long long> ref::bracket_state_sum(const BracketInput& in) {
  const int n = static_cast<int>(in.crossings.size());
  std::vector<long long> coeff(static_cast<std::size_t>(2 * bracket_offset(n)) + 1, 0);
  accumulate_states(in, 0, std::uint64_t{1} << n, coeff);
  return coeff;
}

std::vector<long long> par::bracket_state_sum(const BracketInput& in) {
  const int n = static_cast<int>(in.crossings.size());
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<long long> coeff(static_cast<std::size_t>(2 * bracket_offset(n)) + 1, 0);
#ifdef _OPENMP
  int threads = omp_get_max_threads();
#else
  int threads = 1;
#endif
  std::vector<std::vector<long long>> partial(
      static_cast<std::size_t>(threads),
      std::vector<long long>(coeff.size(), 0));
#pragma omp parallel num_threads(threads)
  {
#ifdef _OPENMP
    int tid = omp_get_thread_num();
    int nt = omp_get_num_threads();
#else
    int tid = 0;
    int nt = 1;
#endif
    std::uint64_t chunk = (total + static_cast<std::uint64_t>(nt) - 1) /
                          static_cast<std::uint64_t>(nt);
    std::uint64_t first = chunk * static_cast<std::uint64_t>(tid);
    std::uint64_t last = std::min(total, first + chunk);
    if (first < last)
      accumulate_states(in, first, last, partial[static_cast<std::size_t>(tid)]);
  }
  for (const auto& p : partial)
    for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] += p[i];
  return coeff;
}

// ---- dispatchers -----------------------------------------------------------

namespace {

#ifdef _OPENMP
constexpr bool kHaveOmp = true;
#else
constexpr bool kHaveOmp = false;
#endif

}  // namespace

double directed_hausdorff(std::span<const Vec4> from, std::span<const Vec4> to) {
  if (kHaveOmp && from.size() >= 256) return par::directed_hausdorff(from, to);
  return ref::directed_hausdorff(from, to);
}

double min_doubly_critical_gap(std::span<const Vec4> pts, bool closed, int min_sep) {
  if (kHaveOmp && pts.size() >= 256) return par::min_doubly_critical_gap(pts, closed, min_sep);
  return ref::min_doubly_critical_gap(pts, closed, min_sep);
}

double max_inner_outer_ratio(const Csr& g, std::span<const Vec4> node_pts,
                             std::span<const int> sources, std::span<const int> targets) {
  if (kHaveOmp && sources.size() >= 8)
    return par::max_inner_outer_ratio(g, node_pts, sources, targets);
  return ref::max_inner_outer_ratio(g, node_pts, sources, targets);
}

double max_projection_distortion(std::span<const Vec4> pts,
                                 std::span<const std::array<double, 2>> proj) {
  if (kHaveOmp && pts.size() >= 256) return par::max_projection_distortion(pts, proj);
  return ref::max_projection_distortion(pts, proj);
}

std::vector<long long> bracket_state_sum(const BracketInput& in) {
  if (kHaveOmp && in.crossings.size() >= 14) return par::bracket_state_sum(in);
  return ref::bracket_state_sum(in);
}

}  // namespace mkf::kernels
