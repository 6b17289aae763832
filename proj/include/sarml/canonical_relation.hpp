#pragma once

// Pointwise evaluation of the canonical relation of the SAR forward operator,
// its projection Jacobians, and the degenerate sets Sigma_1 / Sigma_2.

#include <Eigen/Core>

#include <vector>

#include "sarml/geometry.hpp"

namespace sarml {

// Point of T*Y \ 0: (s, t, sigma, tau).
struct DataCovector {
  double s = 0.0;
  double t = 0.0;
  double sigma = 0.0;
  double tau = 1.0;
};

// Point of T*X \ 0 in chart coordinates: (u, v, xi, eta).
struct SceneCovector {
  double u = 0.0;
  double v = 0.0;
  double xi = 0.0;
  double eta = 0.0;
};

struct CovectorPair {
  DataCovector data;
  SceneCovector scene;
  // Tangent covector vanished: (xi, eta) is not in T*X \ 0.
  bool nadir = false;
};

struct DegeneracyReport {
  double sigma1_residual = 0.0;
  double sigma2_residual = 0.0;
  bool nadir_flag = false;
  // The second vector of the Sigma_1 / Sigma_2 test vanished.
  bool sigma1_degenerate_vector = false;
  bool sigma2_degenerate_vector = false;
  double minsv_piL = 0.0;
  double minsv_piR = 0.0;
};

struct CanonicalOptions {
  double range_eps = kDefaultRangeEps;
  double nadir_eps = 1e-8;
  double fd_step = 1e-5;
};

// Lambda' at the chart point (u, v), path parameter s and fiber variable tau.
// Throws ConfigError for tau == 0 and GeometryError if the path touches the surface.
CovectorPair lambda_forward(const SurfaceChart& chart, const FlightPath& path, double u, double v,
                            double s, double tau, double c0, const CanonicalOptions& options = {});

// Fills the residual fields of DegeneracyReport; minsv fields are left at zero.
DegeneracyReport degeneracy_residuals(const SurfaceChart& chart, const FlightPath& path, double u,
                                      double v, double s, double c0,
                                      const CanonicalOptions& options = {});

struct ProjectionJacobians {
  // Columns are derivatives in (s, tau, u, v); rows are (s, t, sigma, tau) for pi_L
  // and (u, v, xi, eta) for pi_R.
  Eigen::Matrix4d piL;
  Eigen::Matrix4d piR;
  double minsv_piL = 0.0;
  double minsv_piR = 0.0;
};

ProjectionJacobians projection_jacobians(const SurfaceChart& chart, const FlightPath& path,
                                         double u, double v, double s, double tau, double c0,
                                         const CanonicalOptions& options = {});

// Residuals plus smallest singular values of both projection Jacobians.
DegeneracyReport degeneracy_report(const SurfaceChart& chart, const FlightPath& path, double u,
                                   double v, double s, double tau, double c0,
                                   const CanonicalOptions& options = {});

struct GridSpec {
  Interval u;
  Interval v;
  int n_u = 0;
  int n_v = 0;

  double u_at(int i) const;
  double v_at(int j) const;
  double u_step() const { return n_u > 1 ? u.width() / (n_u - 1) : 0.0; }
  double v_step() const { return n_v > 1 ? v.width() / (n_v - 1) : 0.0; }
};

struct DegeneracyMap {
  GridSpec grid;
  double s = 0.0;
  double tau = 1.0;
  double parallel_eps = 1e-6;
  std::vector<DegeneracyReport> cells;  // index j * n_u + i
  std::vector<int> flagged;             // cell indices with min residual <= parallel_eps
  std::vector<int> failed;              // cells where geometry failed (path touches surface)

  const DegeneracyReport& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * grid.n_u + i]; }
};

// OpenMP over cells.
DegeneracyMap degeneracy_map(const SurfaceChart& chart, const FlightPath& path,
                             const GridSpec& grid, double s, double tau, double c0,
                             double parallel_eps = 1e-6, const CanonicalOptions& options = {});

// Serial reference; identical output.
DegeneracyMap degeneracy_map_serial(const SurfaceChart& chart, const FlightPath& path,
                                    const GridSpec& grid, double s, double tau, double c0,
                                    double parallel_eps = 1e-6,
                                    const CanonicalOptions& options = {});

// 1% of the median smallest singular value over the map, per projection.
struct GraphThresholds {
  double piL = 0.0;
  double piR = 0.0;
};
GraphThresholds calibrate_graph_threshold(const DegeneracyMap& map, double fraction = 0.01);

}  // namespace sarml
