#include "sarml/level_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sarml {

TravelTimeLattice::TravelTimeLattice(const SceneField& scene, double c0)
    : scene_(&scene), c0_(c0), n_u_(scene.n_u()), n_v_(scene.n_v()) {
  if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
  const std::size_t n = static_cast<std::size_t>(n_u_ + 1) * (n_v_ + 1);
  corners_.resize(n);
  T_.resize(n);
  for (int j = 0; j <= n_v_; ++j)
    for (int i = 0; i <= n_u_; ++i)
      corners_[static_cast<std::size_t>(j) * (n_u_ + 1) + i] =
          scene.chart().eval(scene.u_corner(i), scene.v_corner(j)).position;
}

void TravelTimeLattice::set_antenna(double s, const PathPoint& antenna) {
  s_ = s;
  antenna_ = antenna;
  double m = kInf;
  for (std::size_t k = 0; k < corners_.size(); ++k) {
    const double r = (corners_[k] - antenna.position).norm();
    T_[k] = 2.0 * r / c0_;
    m = std::min(m, r);
  }
  min_range_ = m;
}

std::array<double, 2> TravelTimeLattice::cell_bounds(int i, int j) const {
  const double a = corner(i, j), b = corner(i + 1, j), c = corner(i + 1, j + 1), d = corner(i, j + 1);
  return {std::min({a, b, c, d}), std::max({a, b, c, d})};
}

double TravelTimeLattice::travel_time(double u, double v) const {
  return 2.0 * (scene_->chart().eval(u, v).position - antenna_.position).norm() / c0_;
}

double TravelTimeLattice::gradient_norm(double u, double v) const {
  const SurfacePoint sp = scene_->chart().eval(u, v);
  const Vec3 R = sp.position - antenna_.position;
  const Vec3 rhat = R / R.norm();
  return 2.0 / c0_ * std::hypot(rhat.dot(sp.d_u), rhat.dot(sp.d_v));
}

std::array<double, 2> TravelTimeLattice::crossing(int i0, int j0, int i1, int j1, double t) const {
  const double u0 = scene_->u_corner(i0), v0 = scene_->v_corner(j0);
  const double u1 = scene_->u_corner(i1), v1 = scene_->v_corner(j1);
  double fa = corner(i0, j0) - t;
  double fb = corner(i1, j1) - t;
  double a = 0.0, b = 1.0;
  double lam = fa / (fa - fb);
  // Illinois regula falsi on the exact travel time along the edge.
  int side = 0;
  const double ftol = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t);
  for (int it = 0; it < 40; ++it) {
    lam = (a * fb - b * fa) / (fb - fa);
    const double f = travel_time(u0 + lam * (u1 - u0), v0 + lam * (v1 - v0)) - t;
    if (std::abs(f) <= ftol || b - a <= 1e-15) break;
    if ((f > 0.0) == (fb > 0.0)) {
      b = lam;
      fb = f;
      if (side == 1) fa *= 0.5;
      side = 1;
    } else {
      a = lam;
      fa = f;
      if (side == -1) fb *= 0.5;
      side = -1;
    }
  }
  return {u0 + lam * (u1 - u0), v0 + lam * (v1 - v0)};
}

int TravelTimeLattice::segments(int i, int j, double t, std::array<Segment, 2>& out) const {
  // Corners c0..c3 counter-clockwise from (i, j); bit k set when corner k lies above t.
  const double c[4] = {corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1)};
  int code = 0;
  for (int k = 0; k < 4; ++k)
    if (c[k] > t) code |= 1 << k;
  if (code == 0 || code == 15) return 0;

  // Edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left (c0-c3).
  auto edge = [&](int e) {
    switch (e) {
      case 0: return crossing(i, j, i + 1, j, t);
      case 1: return crossing(i + 1, j, i + 1, j + 1, t);
      case 2: return crossing(i, j + 1, i + 1, j + 1, t);
      default: return crossing(i, j, i, j + 1, t);
    }
  };
  auto seg = [&](int e0, int e1) { return Segment{edge(e0), edge(e1)}; };

  if (code == 5 || code == 10) {
    const bool center_above = 0.25 * (c[0] + c[1] + c[2] + c[3]) > t;
    if ((code == 5) == center_above) {
      out[0] = seg(0, 1);  // around c1
      out[1] = seg(2, 3);  // around c3
    } else {
      out[0] = seg(3, 0);  // around c0
      out[1] = seg(1, 2);  // around c2
    }
    return 2;
  }
  int crossed[2], n = 0;
  const int ends[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
  for (int e = 0; e < 4; ++e)
    if (((code >> ends[e][0]) & 1) != ((code >> ends[e][1]) & 1)) crossed[n++] = e;
  out[0] = seg(crossed[0], crossed[1]);
  return 1;
}

SegmentSum TravelTimeLattice::integrate_cell(int i, int j, double t, const AmplitudeSpec& amplitude,
                                             double critical_eps) const {
  SegmentSum sum;
  std::array<Segment, 2> segs;
  const int n = segments(i, j, t, segs);
  for (int k = 0; k < n; ++k) {
    const auto& sg = segs[k];
    const double len = std::hypot(sg.b[0] - sg.a[0], sg.b[1] - sg.a[1]);
    if (len == 0.0) continue;
    const double mu = 0.5 * (sg.a[0] + sg.b[0]);
    const double mv = 0.5 * (sg.a[1] + sg.b[1]);
    const double g = gradient_norm(mu, mv);
    if (g <= critical_eps) {
      ++sum.skipped;
      continue;
    }
    const double w = amplitude(mu, mv, s_) * len / g;
    const double eu = 1e-9 * scene_->du(), ev = 1e-9 * scene_->dv();
    const double lo_u = scene_->u_corner(i), hi_u = scene_->u_corner(i + 1);
    const double lo_v = scene_->v_corner(j), hi_v = scene_->v_corner(j + 1);
    auto on_u = [&](double x) { return std::abs(sg.a[0] - x) <= eu && std::abs(sg.b[0] - x) <= eu; };
    auto on_v = [&](double y) { return std::abs(sg.a[1] - y) <= ev && std::abs(sg.b[1] - y) <= ev; };
    // Edge index as in segments(); far = mean corner value on the opposite edge.
    int e = -1;
    double far = 0.0;
    if (on_v(lo_v)) e = 0, far = 0.5 * (corner(i, j + 1) + corner(i + 1, j + 1));
    else if (on_u(hi_u)) e = 1, far = 0.5 * (corner(i, j) + corner(i, j + 1));
    else if (on_v(hi_v)) e = 2, far = 0.5 * (corner(i, j) + corner(i + 1, j));
    else if (on_u(lo_u)) e = 3, far = 0.5 * (corner(i + 1, j) + corner(i + 1, j + 1));
    if (e < 0) {
      sum.weight += w;
      continue;
    }
    const double h = travel_time(mu, mv) - t;
    bool outward;
    if (std::abs(h) <= 64.0 * std::numeric_limits<double>::epsilon() * t)
      outward = e == 1 || e == 2;  // curve along the edge: half-open ownership
    else
      outward = (h > 0.0) == (far > t);  // T on the edge on the far corners' side: crossing lies beyond
    if (!outward) sum.weight += w;
    else if (e == 0) sum.weight_down += w;
    else if (e == 1) sum.weight_right += w;
    else if (e == 2) sum.weight_up += w;
    else sum.weight_left += w;
  }
  return sum;
}

double weighted_value(const SceneField& scene, int i, int j, const SegmentSum& sum) {
  const double own = scene.value(i, j);
  const double right = i + 1 < scene.n_u() ? scene.value(i + 1, j) : own;
  const double up = j + 1 < scene.n_v() ? scene.value(i, j + 1) : own;
  const double left = i > 0 ? scene.value(i - 1, j) : own;
  const double down = j > 0 ? scene.value(i, j - 1) : own;
  return own * sum.weight + right * sum.weight_right + up * sum.weight_up + left * sum.weight_left +
         down * sum.weight_down;
}

bool cell_contributes(const SceneField& scene, int i, int j) {
  return scene.value(i, j) != 0.0 || (i + 1 < scene.n_u() && scene.value(i + 1, j) != 0.0) ||
         (j + 1 < scene.n_v() && scene.value(i, j + 1) != 0.0) || (i > 0 && scene.value(i - 1, j) != 0.0) ||
         (j > 0 && scene.value(i, j - 1) != 0.0);
}

}  // namespace sarml
