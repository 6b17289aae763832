#include <cmath>

#include "doctest.h"
#include "sarml/cancellation.hpp"
#include "sarml/smoothness.hpp"

using namespace sarml;

namespace {

const FlightPath kLine = FlightPath::straight_line(Vec3(0, 0, 1), Vec3::UnitY());
const AcquisitionWindow kWin{{-3, 3}, {1.1, 3}, 2.0};

Sinogram cylinder_sinogram(const std::function<double(double)>& f) {
  const SceneField sc = heaviside_scene(SurfaceChart::cylinder(), {0, M_PI}, 200, {-6, 6}, 200, f);
  return forward_sinogram(sc, {}, kLine, kWin, 121, 96);
}

std::vector<double> alpha_curve(double t) {
  const double a = cylinder_alpha(t, 2.0);
  return {-a, a};
}

// Normalized [1, 1, 1] / 3 along s with edge replication; masked cells stay masked.
Sinogram smooth3(const Sinogram& in) {
  Sinogram out = in;
  for (int it = 0; it < in.n_t; ++it)
    for (int is = 0; is < in.n_s; ++is) {
      if (in.masked(is, it)) continue;
      const int a = std::max(is - 1, 0), b = std::min(is + 1, in.n_s - 1);
      const double l = in.masked(a, it) ? in.at(is, it) : in.at(a, it);
      const double r = in.masked(b, it) ? in.at(is, it) : in.at(b, it);
      out.at(is, it) = (l + in.at(is, it) + r) / 3.0;
    }
  return out;
}

}  // namespace

TEST_CASE("Gaussian field is smooth, cylinder reference is singular") {
  Sinogram like(kWin, 121, 96);
  const Sinogram g = gaussian_calibration_field(like);
  CHECK(smoothness_score(g).verdict == Verdict::smooth);

  const Sinogram ref = cylinder_sinogram([](double u) { return std::sin(u); });
  const SmoothnessScore s = smoothness_score(ref);
  CHECK(s.verdict == Verdict::singular);
  CHECK(s.highfreq_ratio >= 0.0);
  CHECK(s.highfreq_ratio <= 1.0);

  const Sinogram zero = cylinder_sinogram([](double u) { return std::sin(2 * u); });
  SmoothnessOptions o;
  o.reference_scale = ref.max_abs();
  CHECK(smoothness_score(zero, o).verdict == Verdict::smooth);
}

TEST_CASE("jump_detect") {
  const Sinogram ref = cylinder_sinogram([](double u) { return std::sin(u); });
  const JumpReport r = jump_detect(ref, alpha_curve);
  CHECK(r.match_fraction >= 0.95);
  CHECK(r.significant);

  Sinogram like(kWin, 121, 96);
  const JumpReport g = jump_detect(gaussian_calibration_field(like), alpha_curve);
  CHECK_FALSE(g.significant);

  const Sinogram zero = cylinder_sinogram([](double u) { return std::sin(2 * u); });
  CHECK_FALSE(jump_detect(zero, alpha_curve, 3.0, ref.max_abs()).significant);
}

TEST_CASE("smoothing never raises the high-frequency ratio") {
  Sinogram like(kWin, 121, 96);
  const std::vector<Sinogram> fields = {
      gaussian_calibration_field(like), cylinder_sinogram([](double u) { return std::sin(u); }),
      cylinder_sinogram([](double u) { return std::sin(3 * u); }),
      cylinder_sinogram([](double u) { return std::cos(u) + 0.5; })};
  for (const Sinogram& f : fields) {
    Sinogram cur = f;
    for (int pass = 0; pass < 3; ++pass) {
      const Sinogram next = smooth3(cur);
      // Below ratio_floor both values are roundoff.
      const double floor = SmoothnessOptions{}.ratio_floor;
      CHECK(std::max(highfreq_ratio(next), floor) <= std::max(highfreq_ratio(cur), floor));
      cur = next;
    }
  }
}

TEST_CASE("scores are invariant under positive scaling") {
  const Sinogram ref = cylinder_sinogram([](double u) { return std::sin(u); });
  const SmoothnessScore a = smoothness_score(ref);
  for (double c : {0.25, 8.0, 1024.0}) {
    Sinogram s = ref;
    for (double& x : s.values) x *= c;
    const SmoothnessScore b = smoothness_score(s);
    CHECK(b.highfreq_ratio == a.highfreq_ratio);
    CHECK(b.max_cell_jump == a.max_cell_jump);
    CHECK(b.verdict == a.verdict);
  }
  // Other factors round c * x, so agreement is to rounding.
  for (double c : {0.3, 7.1, 1e6}) {
    Sinogram s = ref;
    for (double& x : s.values) x *= c;
    const SmoothnessScore b = smoothness_score(s);
    CHECK(std::abs(b.highfreq_ratio - a.highfreq_ratio) <= 1e-12 * a.highfreq_ratio);
    CHECK(std::abs(b.max_cell_jump - a.max_cell_jump) <= 1e-12 * a.max_cell_jump);
    CHECK(b.verdict == a.verdict);
  }
}

TEST_CASE("fully masked data has no score") {
  Sinogram s(kWin, 40, 40);
  std::fill(s.mask.begin(), s.mask.end(), 1);
  CHECK_THROWS_AS(smoothness_score(s), DomainError);
  Sinogram short_rows(kWin, 20, 40);
  CHECK_THROWS_AS(smoothness_score(short_rows), DomainError);
}
