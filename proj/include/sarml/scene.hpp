#pragma once

// Sampled reflectivity on the chart and sampled data on the acquisition window.

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "sarml/geometry.hpp"

namespace sarml {

// Cell-centred reflectivity samples on a uniform (u, v) grid. Each sample is
// the value of V on its cell, so a jump aligned with a cell edge is
// represented exactly. Cell corners form the lattice on which travel time is
// contoured.
class SceneField {
 public:
  SceneField(SurfaceChart chart, Interval u, Interval v, int n_u, int n_v,
             std::vector<double> values);
  // Samples fn at cell centres.
  static SceneField sample(SurfaceChart chart, Interval u, Interval v, int n_u, int n_v,
                           const std::function<double(double, double)>& fn);

  const SurfaceChart& chart() const { return chart_; }
  Interval u_range() const { return u_; }
  Interval v_range() const { return v_; }
  int n_u() const { return n_u_; }
  int n_v() const { return n_v_; }
  double du() const { return u_.width() / n_u_; }
  double dv() const { return v_.width() / n_v_; }

  // Cell centres use the midpoint-symmetric form so a grid symmetric about
  // its centre maps onto itself exactly.
  double u_center(int i) const;
  double v_center(int j) const;
  double u_corner(int i) const;
  double v_corner(int j) const;

  double value(int i, int j) const { return values_[static_cast<std::size_t>(j) * n_u_ + i]; }
  double& value(int i, int j) { return values_[static_cast<std::size_t>(j) * n_u_ + i]; }
  const std::vector<double>& values() const { return values_; }

  // Value of the cell containing (u, v); zero outside the grid.
  double at(double u, double v) const;

  double max_abs() const;

  SceneField operator+(const SceneField& other) const;
  SceneField scaled(double a) const;

 private:
  SurfaceChart chart_;
  Interval u_, v_;
  int n_u_, n_v_;
  std::vector<double> values_;  // index j * n_u + i
};

// Smooth order-zero amplitude a(u, v, s) >= 0. Empty means A = 1.
struct AmplitudeSpec {
  std::function<double(double, double, double)> taper;
  std::string tag = "unit";

  double operator()(double u, double v, double s) const { return taper ? taper(u, v, s) : 1.0; }
  bool is_unit() const { return !taper; }
};

enum class ForwardMode { delta_shell, band_limited };

struct Sinogram {
  AcquisitionWindow window;
  int n_s = 0;
  int n_t = 0;
  std::vector<double> values;  // index it * n_s + is; NaN where masked
  std::vector<char> mask;      // 1 = masked
  ForwardMode mode = ForwardMode::delta_shell;
  double omega = 0.0;  // band limit for band_limited mode
  std::string amplitude_tag = "unit";
  int near_critical_segments = 0;

  Sinogram() = default;
  Sinogram(const AcquisitionWindow& w, int ns, int nt);

  double s_at(int is) const;
  double t_at(int it) const;
  double& at(int is, int it) { return values[static_cast<std::size_t>(it) * n_s + is]; }
  double at(int is, int it) const { return values[static_cast<std::size_t>(it) * n_s + is]; }
  bool masked(int is, int it) const { return mask[static_cast<std::size_t>(it) * n_s + is] != 0; }
  // Largest |value| over unmasked cells.
  double max_abs() const;
  int unmasked_count() const;
};

}  // namespace sarml
