#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mkf/arc.hpp"
#include "mkf/kernels.hpp"
#include "mkf/surface.hpp"

namespace mkf {

/// A set of surface pieces analyzed as one germ. Pieces must share the
/// same scale ladder; coincident boundary samples are merged when the
/// metric graph is built.
struct SurfaceSet {
  std::vector<const SampledSurface*> pieces;

  SurfaceSet() = default;
  SurfaceSet(std::initializer_list<const SampledSurface*> p) : pieces(p) {}
};

struct GraphOptions {
  bool ring_edges = true;
  bool radial_edges = true;
  bool diagonal_edges = true;
  int knn = 8;
  /// k-NN candidate edges are kept only when shorter than this multiple of
  /// the local sample pitch, so near-approaches of distinct strands never
  /// get welded together.
  double knn_radius_factor = 3.0;
  /// Adds a node for the origin, joined to the finest slice. Closed germs
  /// are path-connected through the origin, and pieces glued only at 0
  /// stay connected in the graph this way.
  bool origin_node = true;
  double merge_tol = 1e-9;
};

/// Discretization of the inner metric: grid adjacency plus filtered k-NN
/// edges, weighted by Euclidean length. Shortest graph paths upper-bound
/// the inner distance with an error controlled by the recorded pitch.
struct MetricGraph {
  kernels::Csr csr;
  std::vector<Vec4> node_pts;
  std::vector<int> node_piece, node_theta, node_scale;  // -1 for the origin node
  std::vector<bool> node_tagged;                        // from a tagged theta column
  std::vector<std::vector<int>> slice_nodes;            // per scale ladder index
  std::vector<double> ladder;
  int origin = -1;  // node id or -1
  double pitch = 0.0;

  int n() const { return csr.n; }
  /// Node id for a grid position, resolving seam merges.
  int node_at(int piece, int j, int k) const;

 private:
  friend MetricGraph build_metric_graph(const SurfaceSet&, const GraphOptions&);
  std::vector<std::vector<int>> grid_to_node_;
  std::vector<int> piece_n_theta_;
};

MetricGraph build_metric_graph(const SurfaceSet& set, const GraphOptions& opts = {});
MetricGraph build_metric_graph(const SampledSurface& s, const GraphOptions& opts = {});

/// Shortest-path distance between two graph nodes. Throws Disconnected if
/// no path exists.
double inner_distance(const MetricGraph& g, int i, int j);

// ---- LNE ------------------------------------------------------------------

struct ScaleLne {
  double t = 0.0;
  double c = 1.0;  // max over slice pairs of d_inn / d_out
  int pairs_checked = 0;
};

struct LneReport {
  std::vector<ScaleLne> per_scale;
  double c_sup = 1.0;
  double uniformity = 1.0;  // max C_k / min C_k
  double bound = 1.25;
  bool lne_consistent = false;
};

/// Per-scale constant: pairs are taken on the scale-t_k slice, inner
/// distances are measured in the whole germ. Sources above `pair_cap` are
/// reduced by farthest-point subsampling (boundary-tagged columns always
/// kept); targets always range over the full slice.
double lne_constant_per_scale(const MetricGraph& g, int k, int pair_cap = 2000,
                              int* pairs_checked = nullptr);

LneReport lne_verdict(const MetricGraph& g, double uniformity_bound = 1.25,
                      int pair_cap = 2000);

// ---- order of tangency ------------------------------------------------------

enum class TordMetric { Outer, Inner };

struct TordEstimate {
  double exponent = 0.0;
  double coeff = 0.0;
  double r_squared = 0.0;
  TordMetric metric = TordMetric::Outer;
  bool identical = false;  // tord = +inf sentinel (exponent set to inf)
  std::vector<double> fit_t, fit_d;  // window used for the fit
};

/// Least-squares fit of log d vs log t over the finest half of the ladder.
/// Arcs must be sampled on the same ladder.
TordEstimate estimate_tord(const ArcSamples& a, const ArcSamples& b);

/// Inner-metric variant: distances between corresponding slice nodes of two
/// theta columns, measured in the carrier graph.
TordEstimate estimate_tord_inner(const MetricGraph& g, int piece_a, int ja, int piece_b,
                                 int jb);

// ---- Hausdorff / tangent cone ----------------------------------------------

double hausdorff_distance(std::span<const Vec4> a, std::span<const Vec4> b);

struct ConeReport {
  std::vector<double> t;
  std::vector<double> consecutive;    // d_H(rescaled link k, rescaled link k+1)
  std::vector<double> to_candidate;   // d_H(rescaled link k, candidate), if given
  double pitch = 0.0;
  bool converged = false;
};

/// Rescales each slice by 1/t_k and records Hausdorff distances between
/// consecutive rescaled links and to an optional candidate limit set.
/// `converged` requires the candidate distances to be non-increasing and
/// the last one to be below tol (default 3x pitch).
ConeReport estimate_tangent_cone(const SurfaceSet& set,
                                 std::span<const Vec4> candidate = {},
                                 std::optional<double> tol = std::nullopt);
ConeReport estimate_tangent_cone(const SampledSurface& s,
                                 std::span<const Vec4> candidate = {},
                                 std::optional<double> tol = std::nullopt);

}  // namespace mkf
