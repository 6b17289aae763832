#pragma once

// Reflectivities with singular support whose forward data vanishes: the
// cylinder f(u)H(v) family with zero-mean f, and mirror-pair cancellation
// under an exact travel-time isometry of the chart.

#include <functional>
#include <span>
#include <string>

#include "sarml/forward_operator.hpp"
#include "sarml/smoothness.hpp"

namespace sarml {

// Named profiles f(u) for Heaviside-product scenes.
struct Profile {
  std::string name = "sin";  // sin | cos | const
  double k = 1.0;

  double operator()(double u) const;
  // Integral over (0, pi).
  double integral_0_pi() const;
};

// V(u, v) = f(u) H(v - v_jump) at cell centres; a centre exactly on the jump gets 1/2.
SceneField heaviside_scene(const SurfaceChart& chart, Interval u, int n_u, Interval v, int n_v,
                           const std::function<double(double)>& f, double v_jump = 0.0);
// Same with f given as samples at the u cell centres.
SceneField heaviside_scene(const SurfaceChart& chart, Interval u, Interval v, int n_v,
                           std::span<const double> f_samples, double v_jump = 0.0);

struct SceneJump {
  double jump = 0.0;      // max |V(i, j0) - V(i, j0 - 1)| across the jump line
  double baseline = 0.0;  // max |first difference in v| elsewhere
  double scale = 0.0;     // max |V1|, set by the cancellation drivers
};
SceneJump scene_jump(const SceneField& scene, double v_jump = 0.0);

struct CancellationReport {
  std::string scenario;
  double reference_norm = 0.0;
  double residual_norm = 0.0;
  double ratio = 0.0;
  double tolerance = 0.0;
  SmoothnessScore reference_smoothness;
  SmoothnessScore residual_smoothness;
  SceneJump scene_jump;
  bool degenerate_reference = false;
  bool pass = false;
  std::string note;
};

struct CylinderDemoGrids {
  int n_u = 400;
  int n_v = 400;
  Interval v = {-6.0, 6.0};
  int n_s = 121;
  int n_t = 96;
};

struct CylinderDemoResult {
  CancellationReport report;
  Sinogram reference;  // f_ref = sin u
  Sinogram residual;   // the requested f
  JumpReport reference_jumps;
  JumpReport residual_jumps;
};

// Unit cylinder, path (0, s, 1). Reference is f_ref = sin u.
CylinderDemoResult cylinder_cancellation_demo(const std::function<double(double)>& f,
                                              const AcquisitionWindow& window,
                                              const CylinderDemoGrids& grids,
                                              double tol_cancel = 1e-3,
                                              const ForwardOptions& options = {},
                                              const SmoothnessOptions& smooth = {});

enum class Isometry { flat_reflect, cylinder_reflect };

Isometry parse_isometry(const std::string& tag);
std::string to_string(Isometry iso);

// Throws ConfigError unless the chart, path, amplitude and scene grid are invariant under iso.
void check_isometry(const SurfaceChart& chart, const FlightPath& path, const SceneField& scene,
                    const AmplitudeSpec& amplitude, Isometry iso);

// V o iota on the same grid (cell index reflection in u).
SceneField reflect(const SceneField& scene, Isometry iso);

struct SymmetricResult {
  SceneField partner;  // V2 = -V1 o iota
  CancellationReport report;
  Sinogram reference;  // F(V1)
  Sinogram residual;   // F(V1 + V2)
};

SymmetricResult symmetric_cancellation(const SurfaceChart& chart, const FlightPath& path,
                                       const SceneField& v1, Isometry iso,
                                       const AcquisitionWindow& window, int n_s, int n_t,
                                       const AmplitudeSpec& amplitude = {},
                                       double tol_cancel = 1e-9,
                                       const ForwardOptions& options = {},
                                       const SmoothnessOptions& smooth = {});

}  // namespace sarml
