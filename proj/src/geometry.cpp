#include "sarml/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sarml {

namespace {

// Catmull-Rom weights and their derivatives for nodes -1, 0, 1, 2 at x in [0, 1].
void catmull_rom(double x, std::array<double, 4>& w, std::array<double, 4>& dw) {
  const double x2 = x * x;
  const double x3 = x2 * x;
  w = {0.5 * (-x3 + 2.0 * x2 - x), 0.5 * (3.0 * x3 - 5.0 * x2 + 2.0),
       0.5 * (-3.0 * x3 + 4.0 * x2 + x), 0.5 * (x3 - x2)};
  dw = {0.5 * (-3.0 * x2 + 4.0 * x - 1.0), 0.5 * (9.0 * x2 - 10.0 * x),
        0.5 * (-9.0 * x2 + 8.0 * x + 1.0), 0.5 * (3.0 * x2 - 2.0 * x)};
}

// Locate the cell of x on a uniform grid with n nodes; returns index and local coordinate.
std::pair<int, double> locate(double x, double lo, double step, int n) {
  double f = (x - lo) / step;
  int i = static_cast<int>(std::floor(f));
  i = std::clamp(i, 0, n - 2);
  return {i, f - i};
}

std::string fmt_point(double a, double b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

BicubicGrid::BicubicGrid(Interval u_range, Interval v_range, int n_u, int n_v,
                         std::vector<double> samples)
    : u_range_(u_range), v_range_(v_range), n_u_(n_u), n_v_(n_v), samples_(std::move(samples)) {
  if (n_u < 2 || n_v < 2) throw ConfigError("height field needs at least 2x2 samples");
  if (static_cast<int>(samples_.size()) != n_u * n_v)
    throw ConfigError("height field sample count does not match n_u * n_v");
  if (!(u_range.hi > u_range.lo) || !(v_range.hi > v_range.lo) || !std::isfinite(u_range.width()) ||
      !std::isfinite(v_range.width()))
    throw ConfigError("height field ranges must be finite and non-empty");
  for (double h : samples_)
    if (!std::isfinite(h)) throw ConfigError("height field samples must be finite");
  du_ = u_range.width() / (n_u - 1);
  dv_ = v_range.width() / (n_v - 1);
}

double BicubicGrid::node(int i, int j) const {
  // Linear extrapolation supplies the ghost ring.
  if (i < 0) return 2.0 * node(0, j) - node(1, j);
  if (i >= n_u_) return 2.0 * node(n_u_ - 1, j) - node(n_u_ - 2, j);
  if (j < 0) return 2.0 * node(i, 0) - node(i, 1);
  if (j >= n_v_) return 2.0 * node(i, n_v_ - 1) - node(i, n_v_ - 2);
  return samples_[static_cast<std::size_t>(j) * n_u_ + i];
}

std::array<double, 3> BicubicGrid::eval(double u, double v) const {
  auto [i, x] = locate(u, u_range_.lo, du_, n_u_);
  auto [j, y] = locate(v, v_range_.lo, dv_, n_v_);
  std::array<double, 4> wu, dwu, wv, dwv;
  catmull_rom(x, wu, dwu);
  catmull_rom(y, wv, dwv);
  double h = 0.0, hu = 0.0, hv = 0.0;
  for (int b = 0; b < 4; ++b) {
    for (int a = 0; a < 4; ++a) {
      const double p = node(i - 1 + a, j - 1 + b);
      h += wu[a] * wv[b] * p;
      hu += dwu[a] * wv[b] * p;
      hv += wu[a] * dwv[b] * p;
    }
  }
  return {h, hu / du_, hv / dv_};
}

SurfaceChart SurfaceChart::flat_plane(double height) {
  SurfaceChart c;
  c.kind_ = Kind::flat_plane;
  c.height_ = height;
  return c;
}

SurfaceChart SurfaceChart::cylinder(double radius, double axis_x, double axis_z) {
  if (!(radius > 0.0)) throw ConfigError("cylinder radius must be positive");
  SurfaceChart c;
  c.kind_ = Kind::cylinder;
  c.radius_ = radius;
  c.axis_x_ = axis_x;
  c.axis_z_ = axis_z;
  c.u_domain_ = {0.0, M_PI};
  return c;
}

SurfaceChart SurfaceChart::height_field(BicubicGrid grid) {
  SurfaceChart c;
  c.kind_ = Kind::height_field;
  c.u_domain_ = grid.u_range();
  c.v_domain_ = grid.v_range();
  c.grid_ = std::make_shared<const BicubicGrid>(std::move(grid));
  return c;
}

SurfacePoint SurfaceChart::eval(double u, double v) const {
  switch (kind_) {
    case Kind::flat_plane:
      return {Vec3(u, v, height_), Vec3::UnitX(), Vec3::UnitY()};
    case Kind::cylinder: {
      const double cu = std::cos(u), su = std::sin(u);
      return {Vec3(axis_x_ + radius_ * cu, v, axis_z_ - radius_ * su),
              Vec3(-radius_ * su, 0.0, -radius_ * cu), Vec3::UnitY()};
    }
    case Kind::height_field: {
      const auto [h, hu, hv] = grid_->eval(u, v);
      return {Vec3(u, v, h), Vec3(1.0, 0.0, hu), Vec3(0.0, 1.0, hv)};
    }
  }
  return {};
}

FlightPath FlightPath::straight_line(const Vec3& origin, const Vec3& direction, Interval s_range) {
  const double n = direction.norm();
  if (!(n > 0.0)) throw ConfigError("straight-line path needs a nonzero direction");
  FlightPath p;
  p.kind_ = Kind::straight_line;
  p.origin_ = origin;
  p.direction_ = direction / n;
  p.s_range_ = s_range;
  return p;
}

FlightPath FlightPath::circle(const Vec3& center, double radius, Interval s_range) {
  if (!(radius > 0.0)) throw ConfigError("circular path radius must be positive");
  FlightPath p;
  p.kind_ = Kind::circle;
  p.origin_ = center;
  p.radius_ = radius;
  p.s_range_ = s_range;
  return p;
}

FlightPath FlightPath::spline(std::vector<double> s, std::vector<Vec3> points) {
  const std::size_t n = s.size();
  if (n < 2 || points.size() != n) throw ConfigError("spline path needs >= 2 matching samples");
  for (std::size_t k = 1; k < n; ++k)
    if (!(s[k] > s[k - 1])) throw ConfigError("spline knots must be strictly increasing");

  // Natural cubic spline: tridiagonal system for second derivatives, zero at the ends.
  std::vector<Vec3> m(n, Vec3::Zero());
  if (n > 2) {
    std::vector<double> diag(n, 0.0), upper(n, 0.0);
    std::vector<Vec3> rhs(n, Vec3::Zero());
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double h0 = s[k] - s[k - 1], h1 = s[k + 1] - s[k];
      diag[k] = 2.0 * (h0 + h1);
      upper[k] = h1;
      rhs[k] = 6.0 * ((points[k + 1] - points[k]) / h1 - (points[k] - points[k - 1]) / h0);
    }
    // Thomas algorithm over interior rows 1..n-2; sub-diagonal of row k is h_{k-1}.
    for (std::size_t k = 2; k + 1 < n; ++k) {
      const double sub = s[k] - s[k - 1];
      const double w = sub / diag[k - 1];
      diag[k] -= w * upper[k - 1];
      rhs[k] -= w * rhs[k - 1];
    }
    for (std::size_t k = n - 2; k >= 1; --k) {
      Vec3 r = rhs[k];
      if (k + 2 < n) r -= upper[k] * m[k + 1];
      m[k] = r / diag[k];
      if (k == 1) break;
    }
  }
  FlightPath p;
  p.kind_ = Kind::spline;
  p.s_range_ = {s.front(), s.back()};
  p.knots_ = std::move(s);
  p.points_ = std::move(points);
  p.second_ = std::move(m);
  return p;
}

PathPoint FlightPath::eval(double s) const {
  switch (kind_) {
    case Kind::straight_line:
      return {origin_ + s * direction_, direction_};
    case Kind::circle: {
      const double a = s / radius_;
      const double ca = std::cos(a), sa = std::sin(a);
      return {origin_ + Vec3(radius_ * ca, radius_ * sa, 0.0), Vec3(-sa, ca, 0.0)};
    }
    case Kind::spline: {
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
      std::size_t k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
          it - knots_.begin() - 1, 0, static_cast<std::ptrdiff_t>(knots_.size()) - 2));
      const double h = knots_[k + 1] - knots_[k];
      const double a = (knots_[k + 1] - s) / h;
      const double b = (s - knots_[k]) / h;
      const Vec3 pos = a * points_[k] + b * points_[k + 1] +
                       ((a * a * a - a) * second_[k] + (b * b * b - b) * second_[k + 1]) * (h * h / 6.0);
      const Vec3 vel = (points_[k + 1] - points_[k]) / h +
                       (-(3.0 * a * a - 1.0) * second_[k] + (3.0 * b * b - 1.0) * second_[k + 1]) *
                           (h / 6.0);
      return {pos, vel};
    }
  }
  return {};
}

void AcquisitionWindow::validate() const {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw ConfigError("c0 must be positive");
  if (!(s.hi > s.lo) || !std::isfinite(s.lo) || !std::isfinite(s.hi))
    throw ConfigError("s-interval must satisfy s2 > s1");
  if (!(t.hi > t.lo) || !(t.lo > 0.0) || !std::isfinite(t.hi))
    throw ConfigError("t-interval must satisfy t2 > t1 > 0");
}

SurfacePoint eval_surface(const SurfaceChart& chart, double u, double v) {
  if (!chart.in_domain(u, v)) throw DomainError("surface point outside chart domain " + fmt_point(u, v));
  return chart.eval(u, v);
}

PathPoint eval_path(const FlightPath& path, double s) {
  if (!path.s_range().contains(s)) throw DomainError("path parameter outside interval: " + std::to_string(s));
  return path.eval(s);
}

GeometryEval eval_geometry(const SurfaceChart& chart, const FlightPath& path, double u, double v,
                           double s, double c0, double range_eps) {
  GeometryEval g;
  g.surface = eval_surface(chart, u, v);
  g.path = eval_path(path, s);
  g.R = g.surface.position - g.path.position;
  g.range = g.R.norm();
  if (!(g.range > range_eps)) throw GeometryError("path touches surface at " + fmt_point(u, v));
  g.rhat = g.R / g.range;
  g.travel_time = 2.0 * g.range / c0;
  g.tangent_covector = {g.rhat.dot(g.surface.d_u), g.rhat.dot(g.surface.d_v)};
  return g;
}

bool in_visible_set(const SurfaceChart& chart, const FlightPath& path,
                    const AcquisitionWindow& window, double u, double v,
                    const VisibilityOptions& options) {
  if (!(window.t.hi > window.t.lo)) return false;
  if (!chart.in_domain(u, v)) return false;
  const Vec3 x = chart.eval(u, v).position;
  const double s1 = std::max(window.s.lo, path.s_range().lo);
  const double s2 = std::min(window.s.hi, path.s_range().hi);
  if (!(s2 > s1)) return false;
  auto T = [&](double s) { return 2.0 * (x - path.eval(s).position).norm() / window.c0; };

  const int n = std::max(options.samples, 3);
  const double ds = (s2 - s1) / n;
  std::vector<double> vals(n);
  for (int k = 0; k < n; ++k) vals[k] = T(s1 + (k + 0.5) * ds);
  const auto kmin = std::min_element(vals.begin(), vals.end()) - vals.begin();
  const auto kmax = std::max_element(vals.begin(), vals.end()) - vals.begin();

  // Golden-section refinement on the bracket around the best sample; sign = +1 minimizes.
  auto refine = [&](std::ptrdiff_t k, double sign) {
    double a = std::max(s1, s1 + (k - 0.5) * ds);
    double b = std::min(s2, s1 + (k + 1.5) * ds);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = sign * T(c), fd = sign * T(d);
    for (int it = 0; it < options.refine_iterations; ++it) {
      if (fc < fd) {
        b = d; d = c; fd = fc;
        c = b - g * (b - a); fc = sign * T(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + g * (b - a); fd = sign * T(d);
      }
    }
    return sign * std::min({fc, fd, sign * vals[k]});
  };
  const double tmin = refine(kmin, 1.0);
  const double tmax = refine(kmax, -1.0);
  return tmin < window.t.hi && tmax > window.t.lo;
}

SelfTestReport derivative_selftest(const SurfaceChart& chart, const FlightPath& path,
                                   std::span<const std::array<double, 2>> surface_samples,
                                   std::span<const double> path_samples, double step,
                                   double tolerance) {
  SelfTestReport r;
  for (const auto& [u, v] : surface_samples) {
    const SurfacePoint p = eval_surface(chart, u, v);
    const Vec3 fu = (chart.eval(u + step, v).position - chart.eval(u - step, v).position) / (2 * step);
    const Vec3 fv = (chart.eval(u, v + step).position - chart.eval(u, v - step).position) / (2 * step);
    r.max_surface_discrepancy =
        std::max({r.max_surface_discrepancy, (fu - p.d_u).lpNorm<Eigen::Infinity>(),
                  (fv - p.d_v).lpNorm<Eigen::Infinity>()});
    ++r.samples;
  }
  for (double s : path_samples) {
    const PathPoint p = eval_path(path, s);
    const Vec3 fs = (path.eval(s + step).position - path.eval(s - step).position) / (2 * step);
    r.max_path_discrepancy = std::max(r.max_path_discrepancy, (fs - p.velocity).lpNorm<Eigen::Infinity>());
    ++r.samples;
  }
  r.pass = r.max_discrepancy() <= tolerance;
  return r;
}

}  // namespace sarml
