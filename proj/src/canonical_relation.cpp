#include "sarml/canonical_relation.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sarml {

namespace {

struct RawEval {
  Vec3 rhat;
  double range;
  std::array<double, 2> a;  // tangent covector
  double doppler;           // rhat . gamma'
};

// Geometry without domain checks, for finite-difference stencils that may
// straddle a chart boundary.
RawEval raw_eval(const SurfaceChart& chart, const FlightPath& path, double u, double v, double s) {
  const SurfacePoint sp = chart.eval(u, v);
  const PathPoint pp = path.eval(s);
  const Vec3 R = sp.position - pp.position;
  RawEval e;
  e.range = R.norm();
  e.rhat = R / e.range;
  e.a = {e.rhat.dot(sp.d_u), e.rhat.dot(sp.d_v)};
  e.doppler = e.rhat.dot(pp.velocity);
  return e;
}

double fd_step(double x, double h) { return h * std::max(1.0, std::abs(x)); }

// |a x b| / (|a||b|) for 2-vectors; -1 when either vector is below eps.
double normalized_cross(const std::array<double, 2>& a, const std::array<double, 2>& b, double eps,
                        bool& a_small, bool& b_small) {
  const double na = std::hypot(a[0], a[1]);
  const double nb = std::hypot(b[0], b[1]);
  a_small = na <= eps;
  b_small = nb <= eps;
  if (a_small || b_small) return 0.0;
  return std::abs(a[0] * b[1] - a[1] * b[0]) / (na * nb);
}

Eigen::Vector4d piL_map(const SurfaceChart& chart, const FlightPath& path, double s, double tau,
                        double u, double v, double c0) {
  const RawEval e = raw_eval(chart, path, u, v, s);
  return {s, 2.0 * e.range / c0, 2.0 * tau / c0 * e.doppler, tau};
}

Eigen::Vector4d piR_map(const SurfaceChart& chart, const FlightPath& path, double s, double tau,
                        double u, double v, double c0) {
  const RawEval e = raw_eval(chart, path, u, v, s);
  const double k = 2.0 * tau / c0;
  return {u, v, k * e.a[0], k * e.a[1]};
}

double smallest_singular_value(const Eigen::Matrix4d& m) {
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(m);
  return svd.singularValues()(3);
}

}  // namespace

CovectorPair lambda_forward(const SurfaceChart& chart, const FlightPath& path, double u, double v,
                            double s, double tau, double c0, const CanonicalOptions& options) {
  if (tau == 0.0 || !std::isfinite(tau)) throw ConfigError("tau must be nonzero: covector leaves T*Y \\ 0");
  const GeometryEval g = eval_geometry(chart, path, u, v, s, c0, options.range_eps);
  const double k = 2.0 * tau / c0;
  CovectorPair out;
  out.data = {s, g.travel_time, k * g.rhat.dot(g.path.velocity), tau};
  out.scene = {u, v, k * g.tangent_covector[0], k * g.tangent_covector[1]};
  out.nadir = std::hypot(g.tangent_covector[0], g.tangent_covector[1]) <= options.nadir_eps;
  return out;
}

DegeneracyReport degeneracy_residuals(const SurfaceChart& chart, const FlightPath& path, double u,
                                      double v, double s, double c0,
                                      const CanonicalOptions& options) {
  // Validates the domain and the range guard.
  const GeometryEval g = eval_geometry(chart, path, u, v, s, c0, options.range_eps);
  const std::array<double, 2> a = g.tangent_covector;

  const double hu = fd_step(u, options.fd_step);
  const double hv = fd_step(v, options.fd_step);
  const double hs = fd_step(s, options.fd_step);

  const std::array<double, 2> grad_doppler = {
      (raw_eval(chart, path, u + hu, v, s).doppler - raw_eval(chart, path, u - hu, v, s).doppler) / (2 * hu),
      (raw_eval(chart, path, u, v + hv, s).doppler - raw_eval(chart, path, u, v - hv, s).doppler) / (2 * hv)};
  const RawEval sp = raw_eval(chart, path, u, v, s + hs);
  const RawEval sm = raw_eval(chart, path, u, v, s - hs);
  const std::array<double, 2> ds_a = {(sp.a[0] - sm.a[0]) / (2 * hs), (sp.a[1] - sm.a[1]) / (2 * hs)};

  DegeneracyReport r;
  bool a_small = false;
  r.sigma1_residual = normalized_cross(a, grad_doppler, options.nadir_eps, a_small, r.sigma1_degenerate_vector);
  r.sigma2_residual = normalized_cross(a, ds_a, options.nadir_eps, a_small, r.sigma2_degenerate_vector);
  r.nadir_flag = a_small;
  if (a_small) {
    r.sigma1_degenerate_vector = false;
    r.sigma2_degenerate_vector = false;
  }
  return r;
}

ProjectionJacobians projection_jacobians(const SurfaceChart& chart, const FlightPath& path,
                                         double u, double v, double s, double tau, double c0,
                                         const CanonicalOptions& options) {
  // Preconditions match lambda_forward.
  (void)lambda_forward(chart, path, u, v, s, tau, c0, options);

  ProjectionJacobians J;
  const std::array<double, 4> x = {s, tau, u, v};
  for (int col = 0; col < 4; ++col) {
    const double h = fd_step(x[col], options.fd_step);
    auto xp = x, xm = x;
    xp[col] += h;
    xm[col] -= h;
    J.piL.col(col) = (piL_map(chart, path, xp[0], xp[1], xp[2], xp[3], c0) -
                      piL_map(chart, path, xm[0], xm[1], xm[2], xm[3], c0)) / (2 * h);
    J.piR.col(col) = (piR_map(chart, path, xp[0], xp[1], xp[2], xp[3], c0) -
                      piR_map(chart, path, xm[0], xm[1], xm[2], xm[3], c0)) / (2 * h);
  }
  J.minsv_piL = smallest_singular_value(J.piL);
  J.minsv_piR = smallest_singular_value(J.piR);
  return J;
}

DegeneracyReport degeneracy_report(const SurfaceChart& chart, const FlightPath& path, double u,
                                   double v, double s, double tau, double c0,
                                   const CanonicalOptions& options) {
  DegeneracyReport r = degeneracy_residuals(chart, path, u, v, s, c0, options);
  const ProjectionJacobians J = projection_jacobians(chart, path, u, v, s, tau, c0, options);
  r.minsv_piL = J.minsv_piL;
  r.minsv_piR = J.minsv_piR;
  return r;
}

double GridSpec::u_at(int i) const {
  if (n_u <= 1) return 0.5 * (u.lo + u.hi);
  // Centered form keeps grids symmetric about their midpoint bit-for-bit.
  return 0.5 * (u.lo + u.hi) + 0.5 * u.width() * (2 * i - (n_u - 1)) / (n_u - 1);
}

double GridSpec::v_at(int j) const {
  if (n_v <= 1) return 0.5 * (v.lo + v.hi);
  return 0.5 * (v.lo + v.hi) + 0.5 * v.width() * (2 * j - (n_v - 1)) / (n_v - 1);
}

namespace {

void fill_cell(DegeneracyMap& map, const SurfaceChart& chart, const FlightPath& path, double c0,
               const CanonicalOptions& options, int idx, bool& failed) {
  const int i = idx % map.grid.n_u;
  const int j = idx / map.grid.n_u;
  try {
    map.cells[idx] = degeneracy_report(chart, path, map.grid.u_at(i), map.grid.v_at(j), map.s,
                                       map.tau, c0, options);
  } catch (const GeometryError&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    map.cells[idx] = {nan, nan, false, false, false, nan, nan};
    failed = true;
  }
}

DegeneracyMap make_map(const GridSpec& grid, double s, double tau, double parallel_eps) {
  if (grid.n_u < 1 || grid.n_v < 1) throw ConfigError("degeneracy grid must be non-empty");
  DegeneracyMap map;
  map.grid = grid;
  map.s = s;
  map.tau = tau;
  map.parallel_eps = parallel_eps;
  map.cells.resize(static_cast<std::size_t>(grid.n_u) * grid.n_v);
  return map;
}

void finish_map(DegeneracyMap& map, const std::vector<char>& failed) {
  for (int idx = 0; idx < static_cast<int>(map.cells.size()); ++idx) {
    if (failed[idx]) {
      map.failed.push_back(idx);
      continue;
    }
    const auto& c = map.cells[idx];
    if (std::min(c.sigma1_residual, c.sigma2_residual) <= map.parallel_eps) map.flagged.push_back(idx);
  }
}

}  // namespace

DegeneracyMap degeneracy_map(const SurfaceChart& chart, const FlightPath& path,
                             const GridSpec& grid, double s, double tau, double c0,
                             double parallel_eps, const CanonicalOptions& options) {
  DegeneracyMap map = make_map(grid, s, tau, parallel_eps);
  const int n = static_cast<int>(map.cells.size());
  std::vector<char> failed(n, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (int idx = 0; idx < n; ++idx) {
    bool f = false;
    fill_cell(map, chart, path, c0, options, idx, f);
    failed[idx] = f;
  }
  finish_map(map, failed);
  return map;
}

DegeneracyMap degeneracy_map_serial(const SurfaceChart& chart, const FlightPath& path,
                                    const GridSpec& grid, double s, double tau, double c0,
                                    double parallel_eps, const CanonicalOptions& options) {
  DegeneracyMap map = make_map(grid, s, tau, parallel_eps);
  const int n = static_cast<int>(map.cells.size());
  std::vector<char> failed(n, 0);
  for (int idx = 0; idx < n; ++idx) {
    bool f = false;
    fill_cell(map, chart, path, c0, options, idx, f);
    failed[idx] = f;
  }
  finish_map(map, failed);
  return map;
}

GraphThresholds calibrate_graph_threshold(const DegeneracyMap& map, double fraction) {
  std::vector<char> skip(map.cells.size(), 0);
  for (int idx : map.failed) skip[idx] = 1;
  std::vector<double> l, r;
  for (std::size_t idx = 0; idx < map.cells.size(); ++idx) {
    if (skip[idx]) continue;
    l.push_back(map.cells[idx].minsv_piL);
    r.push_back(map.cells[idx].minsv_piR);
  }
  auto median = [](std::vector<double>& x) {
    if (x.empty()) return 0.0;
    const auto mid = x.begin() + static_cast<std::ptrdiff_t>(x.size() / 2);
    std::nth_element(x.begin(), mid, x.end());
    return *mid;
  };
  return {fraction * median(l), fraction * median(r)};
}

}  // namespace sarml
