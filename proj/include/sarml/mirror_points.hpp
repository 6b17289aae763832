#pragma once

// Mirror-point sets M_p: all scene covectors that Lambda' sends to one data
// covector p. Solved as the 2x2 range-Doppler system in (u, v).

#include <Eigen/Core>

#include <string>
#include <vector>

#include "sarml/canonical_relation.hpp"

namespace sarml {

struct MirrorResiduals {
  double g1 = 0.0;  // 2|R|/c0 - t
  double g2 = 0.0;  // (2 tau / c0)(rhat . gamma') - sigma

  double norm() const { return std::hypot(g1, g2); }
};

MirrorResiduals mirror_residuals(const SurfaceChart& chart, const FlightPath& path,
                                 const DataCovector& p, double u, double v, double c0,
                                 double range_eps = kDefaultRangeEps);

// d(g1, g2)/d(u, v), analytic in the chart's first derivatives.
Eigen::Matrix2d mirror_jacobian(const SurfaceChart& chart, const FlightPath& path,
                                const DataCovector& p, double u, double v, double c0);

struct MirrorPoint {
  SceneCovector q;
  DegeneracyReport report;
  double residual = 0.0;
  double condition = 0.0;  // condition number of the residual Jacobian
};

enum class TraceStatus { ok, precondition_failed, corrector_failed };

struct TraceOptions {
  double step = 0.02;
  int max_steps = 10000;
  double tol = 1e-8;
  double singular_condition = 1e8;
  int corrector_iterations = 25;
};

struct FamilyCurve {
  std::vector<MirrorPoint> points;  // ordered along the curve
  double max_residual = 0.0;
  TraceStatus status = TraceStatus::ok;
  std::string diagnostic;
};

struct Region {
  Interval u;
  Interval v;

  bool contains(double a, double b) const { return u.contains(a) && v.contains(b); }
};

// Predictor-corrector continuation of a one-dimensional solution family
// through the seed. The seed is corrected first; a corrector failure there or
// a nonsingular Jacobian (isolated root) ends the trace with a status.
FamilyCurve trace_family(const SurfaceChart& chart, const FlightPath& path, const DataCovector& p,
                         double u_seed, double v_seed, double c0, const Region& region,
                         const TraceOptions& options = {}, const CanonicalOptions& canon = {});

struct MirrorOptions {
  double tol_root = 1e-10;
  int newton_iterations = 50;
  double seed_factor = 10.0;
  double singular_condition = 1e8;
  int family_min_points = 8;
  double dedupe_distance = 1e-6;
  TraceOptions trace;
  CanonicalOptions canon;
};

struct MirrorSet {
  DataCovector p;
  Region region;
  int grid_n = 0;
  std::vector<MirrorPoint> isolated;
  std::vector<FamilyCurve> families;
  int seeds = 0;
  int discarded_seeds = 0;  // Newton did not converge inside the region
};

// Grid scan + Newton refinement + family tracing. OpenMP over grid rows and seeds;
// the assembled result is sorted and independent of the thread count.
MirrorSet find_mirror_set(const SurfaceChart& chart, const FlightPath& path, const DataCovector& p,
                          const Region& region, int grid_n, double c0,
                          const MirrorOptions& options = {});

// Bounding box of the visible set, clipped to the chart domain.
Region visible_bounding_box(const SurfaceChart& chart, const FlightPath& path,
                            const AcquisitionWindow& window, int scan_n = 64);

}  // namespace sarml
