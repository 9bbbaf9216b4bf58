// Times the serial reference kernels against their OpenMP builds on
// synthetic workloads sized like a default run.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "mkf/kernels.hpp"
#include "mkf/metric.hpp"
#include "mkf/geometry.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mkf;

namespace {

using clock_type = std::chrono::steady_clock;

template <class F>
double time_ms(F&& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = clock_type::now();
    f();
    auto t1 = clock_type::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

std::vector<Vec4> random_cloud(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec4> pts(static_cast<std::size_t>(n));
  for (Vec4& p : pts) p = normalized(Vec4{g(rng), g(rng), g(rng), g(rng)});
  return pts;
}

void row(const char* name, double ref_ms, double par_ms) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, ref_ms, par_ms,
              par_ms > 0 ? ref_ms / par_ms : 0.0);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP max threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; par == ref\n");
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    std::vector<Vec4> a = random_cloud(4000, 1);
    std::vector<Vec4> b = random_cloud(4000, 2);
    double volatile sink = 0;
    double r = time_ms([&] { sink = kernels::ref::directed_hausdorff(a, b); });
    double p = time_ms([&] { sink = kernels::par::directed_hausdorff(a, b); });
    (void)sink;
    row("directed_hausdorff", r, p);
  }
  {
    std::vector<Vec4> a = random_cloud(4000, 3);
    double volatile sink = 0;
    double r = time_ms([&] { sink = kernels::ref::min_doubly_critical_gap(a, true, 2); });
    double p = time_ms([&] { sink = kernels::par::min_doubly_critical_gap(a, true, 2); });
    (void)sink;
    row("min_doubly_critical_gap", r, p);
  }
  {
    SampledSurface horn = sample_standard_horn(2.0, 256, dyadic_ladder(12));
    MetricGraph g = build_metric_graph(horn);
    const std::vector<int>& slice = g.slice_nodes[4];
    double volatile sink = 0;
    double r = time_ms(
        [&] { sink = kernels::ref::max_inner_outer_ratio(g.csr, g.node_pts, slice, slice); },
        1);
    double p = time_ms(
        [&] { sink = kernels::par::max_inner_outer_ratio(g.csr, g.node_pts, slice, slice); },
        1);
    (void)sink;
    row("max_inner_outer_ratio", r, p);
  }
  {
    // dense 18-crossing state sum (262k states)
    std::mt19937_64 rng(7);
    kernels::BracketInput in;
    int n = 18;
    in.n_arcs = 2 * n;
    std::vector<int> ends;
    for (int i = 0; i < 2 * n; ++i) {
      ends.push_back(i);
      ends.push_back(i);
    }
    std::shuffle(ends.begin(), ends.end(), rng);
    for (int c = 0; c < n; ++c)
      in.crossings.push_back({ends[static_cast<std::size_t>(4 * c)],
                              ends[static_cast<std::size_t>(4 * c + 1)],
                              ends[static_cast<std::size_t>(4 * c + 2)],
                              ends[static_cast<std::size_t>(4 * c + 3)]});
    std::vector<long long> volatile_sink;
    double r = time_ms([&] { volatile_sink = kernels::ref::bracket_state_sum(in); }, 1);
    double p = time_ms([&] { volatile_sink = kernels::par::bracket_state_sum(in); }, 1);
    row("bracket_state_sum (n=18)", r, p);
  }
  {
    std::vector<Vec4> a = random_cloud(1500, 9);
    std::vector<std::array<double, 2>> proj(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) proj[i] = {a[i][0], a[i][1]};
    double volatile sink = 0;
    double r = time_ms([&] { sink = kernels::ref::max_projection_distortion(a, proj); });
    double p = time_ms([&] { sink = kernels::par::max_projection_distortion(a, proj); });
    (void)sink;
    row("max_projection_distortion", r, p);
  }
  return 0;
}
