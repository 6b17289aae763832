#pragma once

// Surface charts, flight paths and the range geometry R = psi(u,v) - gamma(s).

#include <Eigen/Core>

#include <array>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "sarml/errors.hpp"

namespace sarml {

using Vec3 = Eigen::Vector3d;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

struct SurfacePoint {
  Vec3 position;
  Vec3 d_u;
  Vec3 d_v;
};

struct PathPoint {
  Vec3 position;
  Vec3 velocity;
};

// Bicubic (Catmull-Rom) interpolant of height samples on a uniform grid.
// The interpolant is C1, so first derivatives are continuous across cells.
class BicubicGrid {
 public:
  BicubicGrid(Interval u_range, Interval v_range, int n_u, int n_v, std::vector<double> samples);

  // Value and first partials at (u, v).
  std::array<double, 3> eval(double u, double v) const;

  Interval u_range() const { return u_range_; }
  Interval v_range() const { return v_range_; }
  int n_u() const { return n_u_; }
  int n_v() const { return n_v_; }
  const std::vector<double>& samples() const { return samples_; }

 private:
  double node(int i, int j) const;

  Interval u_range_, v_range_;
  int n_u_, n_v_;
  double du_, dv_;
  std::vector<double> samples_;  // row-major, index j * n_u + i
};

// Parametric topography psi(u, v).
class SurfaceChart {
 public:
  enum class Kind { flat_plane, cylinder, height_field };

  // z = height over the whole (u, v) plane.
  static SurfaceChart flat_plane(double height = 0.0);
  // psi(u,v) = (axis_x + r cos u, v, axis_z - r sin u) on u in [0, pi].
  // Unit radius with the default axis gives (cos u, v, 1 - sin u).
  static SurfaceChart cylinder(double radius = 1.0, double axis_x = 0.0, double axis_z = 1.0);
  // psi(u,v) = (u, v, h(u,v)) with h bicubic in the samples.
  static SurfaceChart height_field(BicubicGrid grid);

  Kind kind() const { return kind_; }
  Interval u_domain() const { return u_domain_; }
  Interval v_domain() const { return v_domain_; }
  bool in_domain(double u, double v) const { return u_domain_.contains(u) && v_domain_.contains(v); }

  double height() const { return height_; }
  double radius() const { return radius_; }
  double axis_x() const { return axis_x_; }
  double axis_z() const { return axis_z_; }
  const BicubicGrid* grid() const { return grid_.get(); }

  SurfacePoint eval(double u, double v) const;

 private:
  SurfaceChart() = default;

  Kind kind_ = Kind::flat_plane;
  Interval u_domain_, v_domain_;
  double height_ = 0.0;
  double radius_ = 1.0;
  double axis_x_ = 0.0;
  double axis_z_ = 1.0;
  std::shared_ptr<const BicubicGrid> grid_;
};

// Unit-speed flight path gamma(s).
class FlightPath {
 public:
  enum class Kind { straight_line, circle, spline };

  // gamma(s) = origin + s * direction / |direction|.
  static FlightPath straight_line(const Vec3& origin, const Vec3& direction,
                                  Interval s_range = {});
  // Horizontal circle at the given altitude, arc-length parameterized.
  static FlightPath circle(const Vec3& center, double radius, Interval s_range = {});
  // Natural cubic spline through (s_i, p_i). Samples are expected to be
  // arc-length parameterized; the spline does not reparameterize.
  static FlightPath spline(std::vector<double> s, std::vector<Vec3> points);

  Kind kind() const { return kind_; }
  Interval s_range() const { return s_range_; }
  const Vec3& origin() const { return origin_; }
  const Vec3& direction() const { return direction_; }

  PathPoint eval(double s) const;

 private:
  FlightPath() = default;

  Kind kind_ = Kind::straight_line;
  Interval s_range_;
  Vec3 origin_ = Vec3::Zero();
  Vec3 direction_ = Vec3::UnitY();
  double radius_ = 1.0;
  // spline data: knots and per-axis second derivatives at knots
  std::vector<double> knots_;
  std::vector<Vec3> points_;
  std::vector<Vec3> second_;
};

struct AcquisitionWindow {
  Interval s;
  Interval t;
  double c0 = 2.0;

  // Throws ConfigError unless s.hi > s.lo, t.hi > t.lo > 0, c0 > 0.
  void validate() const;
};

struct GeometryEval {
  Vec3 R;
  double range = 0.0;
  Vec3 rhat;
  double travel_time = 0.0;
  // Chart components (rhat . psi_u, rhat . psi_v).
  std::array<double, 2> tangent_covector{};
  SurfacePoint surface;
  PathPoint path;
};

inline constexpr double kDefaultRangeEps = 1e-9;

SurfacePoint eval_surface(const SurfaceChart& chart, double u, double v);
PathPoint eval_path(const FlightPath& path, double s);

// Throws GeometryError when |R| <= range_eps.
GeometryEval eval_geometry(const SurfaceChart& chart, const FlightPath& path, double u, double v,
                           double s, double c0, double range_eps = kDefaultRangeEps);

struct VisibilityOptions {
  int samples = 256;
  int refine_iterations = 60;
};

// True iff some s in (s1, s2) has 2|R(u,v,s)|/c0 in (t1, t2).
bool in_visible_set(const SurfaceChart& chart, const FlightPath& path,
                    const AcquisitionWindow& window, double u, double v,
                    const VisibilityOptions& options = {});

struct SelfTestReport {
  double max_surface_discrepancy = 0.0;
  double max_path_discrepancy = 0.0;
  int samples = 0;
  bool pass = false;

  double max_discrepancy() const {
    return max_surface_discrepancy > max_path_discrepancy ? max_surface_discrepancy
                                                          : max_path_discrepancy;
  }
};

// Compares analytic psi_u, psi_v and gamma' against central differences.
SelfTestReport derivative_selftest(const SurfaceChart& chart, const FlightPath& path,
                                   std::span<const std::array<double, 2>> surface_samples,
                                   std::span<const double> path_samples, double step = 1e-5,
                                   double tolerance = 1e-6);

}  // namespace sarml
