#include "sarml/forward_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sarml {

namespace {

void check_window(const AcquisitionWindow& window, int n_s, int n_t) {
  window.validate();
  if (n_s < 1 || n_t < 1) throw ConfigError("sinogram grid must be non-empty");
}

bool grazing(double t, double c0, double min_range, double guard) {
  const double half = 0.5 * c0 * t;
  return half * half - min_range * min_range < guard * guard;
}

// One s column of the delta-shell sinogram. Cells are visited in index order so
// every (s, t) value is accumulated in the same order as delta_shell_forward.
void sinogram_column(const SceneField& scene, const AmplitudeSpec& amplitude,
                     const FlightPath& path, const ForwardOptions& options, int is,
                     TravelTimeLattice& lattice, Sinogram& out, int& skipped) {
  const double s = out.s_at(is);
  const AcquisitionWindow& w = out.window;
  lattice.set_antenna(s, path.eval(s));
  if (!(lattice.min_range() > options.range_eps)) {
    for (int it = 0; it < out.n_t; ++it) {
      out.mask[static_cast<std::size_t>(it) * out.n_s + is] = 1;
      out.at(is, it) = std::numeric_limits<double>::quiet_NaN();
    }
    return;
  }
  std::vector<char> col_mask(out.n_t);
  for (int it = 0; it < out.n_t; ++it)
    col_mask[it] = grazing(out.t_at(it), w.c0, lattice.min_range(), options.alpha_guard);
  std::vector<double> acc(out.n_t, 0.0);
  const double dt = out.n_t > 1 ? w.t.width() / (out.n_t - 1) : 1.0;

  for (int j = 0; j < scene.n_v(); ++j) {
    for (int i = 0; i < scene.n_u(); ++i) {
      if (!cell_contributes(scene, i, j)) continue;
      const auto [lo, hi] = lattice.cell_bounds(i, j);
      int k0 = 0, k1 = out.n_t - 1;
      if (out.n_t > 1) {
        k0 = std::max(0, static_cast<int>(std::floor((lo - w.t.lo) / dt)) - 1);
        k1 = std::min(out.n_t - 1, static_cast<int>(std::ceil((hi - w.t.lo) / dt)) + 1);
      }
      for (int it = k0; it <= k1; ++it) {
        if (col_mask[it]) continue;
        const SegmentSum seg = lattice.integrate_cell(i, j, out.t_at(it), amplitude, options.critical_grad_eps);
        acc[it] += weighted_value(scene, i, j, seg);
        skipped += seg.skipped;
      }
    }
  }
  for (int it = 0; it < out.n_t; ++it) {
    out.mask[static_cast<std::size_t>(it) * out.n_s + is] = col_mask[it];
    out.at(is, it) = col_mask[it] ? std::numeric_limits<double>::quiet_NaN() : acc[it];
  }
}

Sinogram make_sinogram(const SceneField& scene, const AmplitudeSpec& amplitude,
                       const AcquisitionWindow& window, int n_s, int n_t) {
  check_window(window, n_s, n_t);
  (void)scene;
  Sinogram out(window, n_s, n_t);
  out.mode = ForwardMode::delta_shell;
  out.amplitude_tag = amplitude.tag;
  return out;
}

}  // namespace

ForwardSample delta_shell_forward(const SceneField& scene, const AmplitudeSpec& amplitude,
                                  const FlightPath& path, double s, double t, double c0,
                                  const ForwardOptions& options) {
  TravelTimeLattice lattice(scene, c0);
  lattice.set_antenna(s, eval_path(path, s));
  if (!(lattice.min_range() > options.range_eps)) throw GeometryError("path touches surface");
  ForwardSample out;
  for (int j = 0; j < scene.n_v(); ++j) {
    for (int i = 0; i < scene.n_u(); ++i) {
      if (!cell_contributes(scene, i, j)) continue;
      const SegmentSum seg = lattice.integrate_cell(i, j, t, amplitude, options.critical_grad_eps);
      out.value += weighted_value(scene, i, j, seg);
      out.skipped_segments += seg.skipped;
    }
  }
  return out;
}

Sinogram forward_sinogram(const SceneField& scene, const AmplitudeSpec& amplitude,
                          const FlightPath& path, const AcquisitionWindow& window, int n_s,
                          int n_t, const ForwardOptions& options) {
  Sinogram out = make_sinogram(scene, amplitude, window, n_s, n_t);
  int skipped = 0;
#pragma omp parallel reduction(+ : skipped)
  {
    TravelTimeLattice lattice(scene, window.c0);
#pragma omp for schedule(dynamic, 1)
    for (int is = 0; is < n_s; ++is) sinogram_column(scene, amplitude, path, options, is, lattice, out, skipped);
  }
  out.near_critical_segments = skipped;
  return out;
}

Sinogram forward_sinogram_serial(const SceneField& scene, const AmplitudeSpec& amplitude,
                                 const FlightPath& path, const AcquisitionWindow& window, int n_s,
                                 int n_t, const ForwardOptions& options) {
  Sinogram out = make_sinogram(scene, amplitude, window, n_s, n_t);
  TravelTimeLattice lattice(scene, window.c0);
  int skipped = 0;
  for (int is = 0; is < n_s; ++is) sinogram_column(scene, amplitude, path, options, is, lattice, out, skipped);
  out.near_critical_segments = skipped;
  return out;
}

double bandlimited_kernel(double x, double omega, int n_omega) {
  const double dw = 2.0 * omega / (n_omega - 1);
  const double theta = dw * x;
  const double half = std::sin(0.5 * theta);
  double sum;
  if (std::abs(half) > 1e-6) {
    sum = std::sin(0.5 * n_omega * theta) / half;
  } else {
    sum = 0.0;
    for (int k = 0; k < n_omega; ++k) sum += std::cos((-omega + k * dw) * x);
  }
  sum -= std::cos(omega * x);  // endpoint half-weights
  return dw * sum / (2.0 * M_PI);
}

double bandlimited_forward(const SceneField& scene, const AmplitudeSpec& amplitude,
                           const FlightPath& path, double s, double t, double omega, int n_omega,
                           double c0) {
  if (n_omega < 16) throw ConfigError("band-limited forward needs n_omega >= 16");
  if (!(omega > 0.0)) throw ConfigError("band limit omega must be positive");
  if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
  const PathPoint antenna = eval_path(path, s);
  const double area = scene.du() * scene.dv();
  double sum = 0.0;
  for (int j = 0; j < scene.n_v(); ++j) {
    for (int i = 0; i < scene.n_u(); ++i) {
      const double val = scene.value(i, j);
      if (val == 0.0) continue;
      const double u = scene.u_center(i), v = scene.v_center(j);
      const double T = 2.0 * (scene.chart().eval(u, v).position - antenna.position).norm() / c0;
      sum += val * amplitude(u, v, s) * bandlimited_kernel(t - T, omega, n_omega);
    }
  }
  return sum * area;
}

Sinogram bandlimited_sinogram(const SceneField& scene, const AmplitudeSpec& amplitude,
                              const FlightPath& path, const AcquisitionWindow& window, int n_s,
                              int n_t, double omega, int n_omega, const ForwardOptions& options) {
  check_window(window, n_s, n_t);
  if (n_omega < 16) throw ConfigError("band-limited forward needs n_omega >= 16");
  Sinogram out(window, n_s, n_t);
  out.mode = ForwardMode::band_limited;
  out.omega = omega;
  out.amplitude_tag = amplitude.tag;
#pragma omp parallel
  {
    TravelTimeLattice lattice(scene, window.c0);
#pragma omp for schedule(dynamic, 1)
    for (int is = 0; is < n_s; ++is) {
      const double s = out.s_at(is);
      lattice.set_antenna(s, path.eval(s));
      for (int it = 0; it < n_t; ++it) {
        const std::size_t k = static_cast<std::size_t>(it) * n_s + is;
        if (!(lattice.min_range() > options.range_eps) ||
            grazing(out.t_at(it), window.c0, lattice.min_range(), options.alpha_guard)) {
          out.mask[k] = 1;
          out.values[k] = std::numeric_limits<double>::quiet_NaN();
          continue;
        }
        out.values[k] = bandlimited_forward(scene, amplitude, path, s, out.t_at(it), omega, n_omega, window.c0);
      }
    }
  }
  return out;
}

double cylinder_alpha(double t, double c0) {
  const double half = 0.5 * c0 * t;
  if (!(half > 1.0)) throw DomainError("cylinder closed form needs c0 t / 2 > 1");
  return std::sqrt(half * half - 1.0);
}

double cylinder_closed_form(double s, double t, double integral_f, double c0) {
  const double alpha = cylinder_alpha(t, c0);
  const double heavisides = (s + alpha >= 0.0 ? 1.0 : 0.0) + (s - alpha >= 0.0 ? 1.0 : 0.0);
  return 0.25 * c0 * c0 * t * heavisides / alpha * integral_f;
}

}  // namespace sarml
