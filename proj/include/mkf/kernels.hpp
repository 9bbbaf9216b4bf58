#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mkf/vec4.hpp"

// Hot inner loops, each in two builds: a serial reference (kernels::ref)
// and an OpenMP version (kernels::par). The unqualified wrappers dispatch
// to the parallel build when OpenMP is available and the input is large
// enough to pay for it. ref and par must agree exactly; tests compare them
// and tools/mkf_bench times them against each other.

namespace mkf::kernels {

/// Weighted adjacency in CSR form. off has n+1 entries.
struct Csr {
  int n = 0;
  std::vector<int> off;
  std::vector<int> to;
  std::vector<double> w;
};

/// Single-source shortest paths; unreachable nodes get +inf.
std::vector<double> dijkstra(const Csr& g, int source);

/// One Kauffman-state work unit: per crossing the four incident arc ids in
/// planar counterclockwise order starting from the under-in end. The A
/// smoothing joins (0,1) and (2,3); the B smoothing joins (0,3) and (1,2).
struct BracketInput {
  int n_arcs = 0;
  int extra_loops = 0;  // crossing-free circles carried alongside
  std::vector<std::array<int, 4>> crossings;
};

/// Bracket state sum as a dense coefficient table over A-exponents:
/// out[e + offset] = coefficient of A^e, offset = bracket_offset(n).
int bracket_offset(int n_crossings);
std::vector<long long> bracket_state_sum(const BracketInput& in);

namespace ref {
double directed_hausdorff(std::span<const Vec4> from, std::span<const Vec4> to);
double min_doubly_critical_gap(std::span<const Vec4> pts, bool closed, int min_sep);
double max_inner_outer_ratio(const Csr& g, std::span<const Vec4> node_pts,
                             std::span<const int> sources, std::span<const int> targets);
double max_projection_distortion(std::span<const Vec4> pts,
                                 std::span<const std::array<double, 2>> proj);
std::vector<long long> bracket_state_sum(const BracketInput& in);
}  // namespace ref

namespace par {
double directed_hausdorff(std::span<const Vec4> from, std::span<const Vec4> to);
double min_doubly_critical_gap(std::span<const Vec4> pts, bool closed, int min_sep);
double max_inner_outer_ratio(const Csr& g, std::span<const Vec4> node_pts,
                             std::span<const int> sources, std::span<const int> targets);
double max_projection_distortion(std::span<const Vec4> pts,
                                 std::span<const std::array<double, 2>> proj);
std::vector<long long> bracket_state_sum(const BracketInput& in);
}  // namespace par

double directed_hausdorff(std::span<const Vec4> from, std::span<const Vec4> to);
double min_doubly_critical_gap(std::span<const Vec4> pts, bool closed, int min_sep);
double max_inner_outer_ratio(const Csr& g, std::span<const Vec4> node_pts,
                             std::span<const int> sources, std::span<const int> targets);
double max_projection_distortion(std::span<const Vec4> pts,
                                 std::span<const std::array<double, 2>> proj);

}  // namespace mkf::kernels
