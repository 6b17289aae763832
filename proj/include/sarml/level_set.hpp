#pragma once

// Marching-squares extraction of iso-range curves {2|R|/c0 = t} on the scene
// lattice, with per-segment midpoint quadrature of the coarea weight 1/|grad T|.

#include <array>
#include <vector>

#include "sarml/scene.hpp"

namespace sarml {

struct Segment {
  std::array<double, 2> a;
  std::array<double, 2> b;
};

// Sums of A * length / |grad T| over the segments found in one cell. A chord
// lying on a cell edge belongs to the side the true curve bulges into, judged
// by T at the chord midpoint. When the curve runs along the edge itself the
// cell is half-open, [u_i, u_i+1) x [v_j, v_j+1): right and top edges go to
// the neighbour.
struct SegmentSum {
  double weight = 0.0;
  double weight_right = 0.0;  // owned by cell (i + 1, j)
  double weight_up = 0.0;     // owned by cell (i, j + 1)
  double weight_left = 0.0;   // owned by cell (i - 1, j)
  double weight_down = 0.0;   // owned by cell (i, j - 1)
  int skipped = 0;            // near-critical segments dropped
};

// V-weighted value of a SegmentSum from cell (i, j). Outside the grid the
// neighbour's value is the cell's own.
double weighted_value(const SceneField& scene, int i, int j, const SegmentSum& sum);
// False when (i, j) and the neighbours that may own its edges are all zero.
bool cell_contributes(const SceneField& scene, int i, int j);

// Travel times at the cell corners of a scene for one antenna position.
class TravelTimeLattice {
 public:
  TravelTimeLattice(const SceneField& scene, double c0);

  void set_antenna(double s, const PathPoint& antenna);

  double s() const { return s_; }
  double corner(int i, int j) const { return T_[static_cast<std::size_t>(j) * (n_u_ + 1) + i]; }
  // Smallest corner range |R|.
  double min_range() const { return min_range_; }
  std::array<double, 2> cell_bounds(int i, int j) const;

  double travel_time(double u, double v) const;
  // |grad_{u,v} T| at (u, v).
  double gradient_norm(double u, double v) const;

  // Iso-segments of T = t inside cell (i, j). Edge crossings start from linear
  // interpolation and are refined on the exact travel time.
  int segments(int i, int j, double t, std::array<Segment, 2>& out) const;

  SegmentSum integrate_cell(int i, int j, double t, const AmplitudeSpec& amplitude,
                            double critical_eps) const;

 private:
  std::array<double, 2> crossing(int i0, int j0, int i1, int j1, double t) const;

  const SceneField* scene_;
  double c0_;
  int n_u_, n_v_;
  std::vector<Vec3> corners_;  // surface positions at cell corners
  std::vector<double> T_;
  double s_ = 0.0;
  PathPoint antenna_;
  double min_range_ = 0.0;
};

}  // namespace sarml
