// Serial reference vs OpenMP kernels on the cylinder Heaviside scenario.
// Usage: bench_kernels [scene_n] [repeats]

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "sarml/cancellation.hpp"
#include "sarml/canonical_relation.hpp"

using namespace sarml;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
  double best = INFINITY;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 400;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  const SurfaceChart cyl = SurfaceChart::cylinder();
  const FlightPath path = FlightPath::straight_line(Vec3(0, 0, 1), Vec3::UnitY());
  const AcquisitionWindow w{{-3, 3}, {1.1, 3}, 2.0};
  const SceneField scene = heaviside_scene(cyl, {0, M_PI}, n, {-6, 6}, n, [](double u) { return std::sin(u); });

  std::printf("threads available: %d\n", omp_get_max_threads());
  Sinogram a, b;
  const double ts = best_of(repeats, [&] { a = forward_sinogram_serial(scene, {}, path, w, 121, 96); });
  const double tp = best_of(repeats, [&] { b = forward_sinogram(scene, {}, path, w, 121, 96); });
  bool same = a.values.size() == b.values.size();
  for (std::size_t k = 0; same && k < a.values.size(); ++k)
    same = (a.values[k] == b.values[k]) || (std::isnan(a.values[k]) && std::isnan(b.values[k]));
  std::printf("sinogram %dx%d scene, 121x96 data: serial %.3f s, openmp %.3f s, speedup %.2f, identical %s\n", n, n,
              ts, tp, ts / tp, same ? "yes" : "no");

  const GridSpec g{{-2.5, 2.5}, {-2.5, 2.5}, 201, 201};
  const SurfaceChart flat = SurfaceChart::flat_plane();
  const double ds = best_of(repeats, [&] { (void)degeneracy_map_serial(flat, path, g, 0.0, 1.0, 2.0); });
  const double dp = best_of(repeats, [&] { (void)degeneracy_map(flat, path, g, 0.0, 1.0, 2.0); });
  std::printf("degeneracy map 201x201: serial %.3f s, openmp %.3f s, speedup %.2f\n", ds, dp, ds / dp);
  return same ? 0 : 1;
}
