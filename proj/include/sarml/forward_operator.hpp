#pragma once

// Forward data FV(s, t): delta-shell (iso-range line integral) and band-limited
// oscillatory modes, plus the closed form for the unit cylinder scenario.

#include "sarml/level_set.hpp"
#include "sarml/scene.hpp"

namespace sarml {

struct ForwardOptions {
  double critical_grad_eps = 1e-9;  // |grad T| below this skips a segment
  double alpha_guard = 0.05;        // mask cells with sqrt((c0 t/2)^2 - d(s)^2) below this
  double range_eps = kDefaultRangeEps;
};

struct ForwardSample {
  double value = 0.0;
  int skipped_segments = 0;
};

// Integral of A V / |grad_{u,v} T| over {T(., ., s) = t}; the delta pairing
// carries no 2 pi factor. Does not apply the grazing mask.
ForwardSample delta_shell_forward(const SceneField& scene, const AmplitudeSpec& amplitude,
                                  const FlightPath& path, double s, double t, double c0,
                                  const ForwardOptions& options = {});

// Sinogram on an n_s x n_t grid covering the window (endpoints included).
// OpenMP over s columns; output is independent of the thread count.
Sinogram forward_sinogram(const SceneField& scene, const AmplitudeSpec& amplitude,
                          const FlightPath& path, const AcquisitionWindow& window, int n_s,
                          int n_t, const ForwardOptions& options = {});

// Serial reference for forward_sinogram; bit-identical output.
Sinogram forward_sinogram_serial(const SceneField& scene, const AmplitudeSpec& amplitude,
                                 const FlightPath& path, const AcquisitionWindow& window, int n_s,
                                 int n_t, const ForwardOptions& options = {});

// (1/2pi) * trapezoid rule over [-Omega, Omega] with n_omega nodes of cos(omega x),
// summed in closed form (Dirichlet kernel).
double bandlimited_kernel(double x, double omega, int n_omega);

// Real part of (1/2pi) int_{|w|<=Omega} int int A V exp(-i w (t - T)) du dv dw,
// trapezoid in omega, cell-centre summation over the scene. n_omega >= 16.
double bandlimited_forward(const SceneField& scene, const AmplitudeSpec& amplitude,
                           const FlightPath& path, double s, double t, double omega, int n_omega,
                           double c0);

Sinogram bandlimited_sinogram(const SceneField& scene, const AmplitudeSpec& amplitude,
                              const FlightPath& path, const AcquisitionWindow& window, int n_s,
                              int n_t, double omega, int n_omega,
                              const ForwardOptions& options = {});

// Closed-form data for V = f(u) H(v) on the unit cylinder with the path on its
// axis: (c0^2/4) t [H(s + alpha) + H(s - alpha)] / alpha * integral_f,
// alpha = sqrt(c0^2 t^2 / 4 - 1), H(0) = 1. DomainError if c0 t / 2 <= 1.
double cylinder_closed_form(double s, double t, double integral_f, double c0);

double cylinder_alpha(double t, double c0);

}  // namespace sarml
