#include <omp.h>

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sarml/canonical_relation.hpp"

using namespace sarml;

namespace {

const FlightPath kLine = FlightPath::straight_line(Vec3(0, 0, 1), Vec3::UnitY());
const double kR2 = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("lambda_forward examples") {
  const CovectorPair f = lambda_forward(SurfaceChart::flat_plane(), kLine, 1, 0, 0, 1, 2.0);
  CHECK(f.data.s == 0.0);
  CHECK(f.data.t == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(f.data.sigma == 0.0);
  CHECK(f.data.tau == 1.0);
  CHECK(f.scene.xi == doctest::Approx(kR2).epsilon(1e-15));
  CHECK(f.scene.eta == 0.0);
  CHECK_FALSE(f.nadir);

  const CovectorPair c = lambda_forward(SurfaceChart::cylinder(), kLine, M_PI / 2, 1, 0, 1, 2.0);
  CHECK(c.data.t == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(c.data.sigma == doctest::Approx(kR2).epsilon(1e-15));
  CHECK(std::abs(c.scene.xi) <= 1e-16);
  CHECK(c.scene.eta == doctest::Approx(kR2).epsilon(1e-15));

  const CovectorPair d = lambda_forward(SurfaceChart::cylinder(), kLine, M_PI / 2, 1, 0, 2, 2.0);
  CHECK(d.data.s == c.data.s);
  CHECK(d.data.t == c.data.t);
  CHECK(d.data.sigma == 2 * c.data.sigma);
  CHECK(d.scene.xi == 2 * c.scene.xi);
  CHECK(d.scene.eta == 2 * c.scene.eta);

  CHECK_THROWS_AS(lambda_forward(SurfaceChart::flat_plane(), kLine, 1, 0, 0, 0.0, 2.0), ConfigError);
  CHECK(lambda_forward(SurfaceChart::flat_plane(), kLine, 0, 0.3, 0.3, 1, 2.0).nadir);
}

TEST_CASE("lambda_forward matches the hand-derived flat relation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> X(-3, 3), T(-5, 5), H(0.5, 3);
  for (int k = 0; k < 400; ++k) {
    const double u = X(rng), v = X(rng), s = X(rng), tau = T(rng), dz = H(rng), c0 = 1.0 + std::abs(T(rng));
    const FlightPath path = FlightPath::straight_line(Vec3(0, 0, dz), Vec3::UnitY());
    const CovectorPair p = lambda_forward(SurfaceChart::flat_plane(), path, u, v, s, tau, c0);
    const auto o = oracle::flat_lambda(u, v, s, tau, dz, c0);
    const double got[8] = {p.data.s, p.data.t, p.data.sigma, p.data.tau, p.scene.u, p.scene.v, p.scene.xi, p.scene.eta};
    for (int i = 0; i < 8; ++i) CHECK(std::abs(got[i] - o[i]) <= 1e-13 * (1 + std::abs(o[i])));
    CHECK(std::abs(p.data.sigma) <= 2 * std::abs(tau) / c0 * (1 + 1e-9));
  }
}

TEST_CASE("degeneracy_residuals examples") {
  const SurfaceChart flat = SurfaceChart::flat_plane();
  const DegeneracyReport a = degeneracy_residuals(flat, kLine, 0.0, 1.2, 0.0, 2.0);
  CHECK(a.sigma1_residual == 0.0);
  CHECK(a.sigma2_residual == 0.0);

  const DegeneracyReport b = degeneracy_residuals(flat, kLine, 1.0, 0.5, 0.5, 2.0);
  CHECK(b.sigma1_residual == doctest::Approx(1.0).epsilon(1e-8));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.1, 3.0), V(-3, 3);
  for (int k = 0; k < 100; ++k) {
    const double v = V(rng), s = V(rng);
    if (std::abs(v - s) < 1e-3) continue;
    CHECK(degeneracy_residuals(SurfaceChart::cylinder(), kLine, U(rng), v, s, 2.0).sigma2_residual <= 1e-6);
  }
}

TEST_CASE("flat residuals are invariant under (u, v, s) -> (-u, v + d, s + d)") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> X(-2, 2);
  const SurfaceChart flat = SurfaceChart::flat_plane();
  for (int k = 0; k < 200; ++k) {
    const double u = X(rng), v = X(rng), s = X(rng), d = X(rng);
    const DegeneracyReport a = degeneracy_residuals(flat, kLine, u, v, s, 2.0);
    const DegeneracyReport b = degeneracy_residuals(flat, kLine, -u, v + d, s + d, 2.0);
    CHECK(std::abs(a.sigma1_residual - b.sigma1_residual) <= 1e-10);
    CHECK(std::abs(a.sigma2_residual - b.sigma2_residual) <= 1e-10);
  }
}

TEST_CASE("projection_jacobians examples") {
  const SurfaceChart flat = SurfaceChart::flat_plane();
  const ProjectionJacobians g = projection_jacobians(flat, kLine, 1, 0, 0, 1, 2.0);
  CHECK(g.minsv_piL > 0.01);
  CHECK(g.minsv_piR > 0.01);

  CHECK(projection_jacobians(SurfaceChart::cylinder(), kLine, M_PI / 2, 1, 0, 1, 2.0).minsv_piR <= 1e-6);

  const ProjectionJacobians n = projection_jacobians(flat, kLine, 0, 0.5, 0.5, 1, 2.0);
  CHECK(n.minsv_piL <= 1e-6);
  CHECK(n.minsv_piR <= 1e-6);
}

TEST_CASE("finite-difference Jacobians match the explicit flat rows") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> X(-2, 2), T(0.5, 3);
  for (int k = 0; k < 100; ++k) {
    const double u = X(rng), v = X(rng), s = X(rng), tau = T(rng);
    const ProjectionJacobians j = projection_jacobians(SurfaceChart::flat_plane(), kLine, u, v, s, tau, 2.0);
    double L[4][4], R[4][4];
    oracle::flat_jacobians(u, v, s, tau, 1.0, 2.0, L, R);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        CHECK(std::abs(j.piL(a, b) - L[a][b]) <= 1e-6);
        CHECK(std::abs(j.piR(a, b) - R[a][b]) <= 1e-6);
      }
  }
}

TEST_CASE("degeneracy_map on the flat plane flags the nadir strip") {
  const SurfaceChart flat = SurfaceChart::flat_plane();
  const GridSpec g{{-2, 2}, {-2, 2}, 101, 101};
  const DegeneracyMap m = degeneracy_map(flat, kLine, g, 0.0, 1.0, 2.0);
  const double step = g.u_step();
  std::vector<int> rows(g.n_v, 0);
  for (int idx : m.flagged) {
    const int i = idx % g.n_u, j = idx / g.n_u;
    CHECK(std::abs(g.u_at(i)) <= step * (1 + 1e-12));
    ++rows[j];
  }
  for (int j = 0; j < g.n_v; ++j) CHECK(rows[j] >= 1);

  // Residual / rank equivalence.
  const GraphThresholds th = calibrate_graph_threshold(m);
  for (const DegeneracyReport& c : m.cells) {
    if (c.sigma1_residual <= 1e-6) CHECK(c.minsv_piL <= 1e-5);
    if (c.sigma2_residual <= 1e-6) CHECK(c.minsv_piR <= 1e-5);
    if (c.sigma1_residual >= 0.1 && c.sigma2_residual >= 0.1) {
      CHECK(c.minsv_piL >= th.piL);
      CHECK(c.minsv_piR >= th.piR);
    }
  }

  const DegeneracyMap off = degeneracy_map(flat, kLine, {{0.5, 2}, {-2, 2}, 41, 41}, 0.0, 1.0, 2.0);
  CHECK(off.flagged.empty());
}

TEST_CASE("degeneracy_map on the cylinder flags every non-nadir cell") {
  const GridSpec g{{0.05, M_PI - 0.05}, {-2, 2}, 40, 41};
  const DegeneracyMap m = degeneracy_map(SurfaceChart::cylinder(), kLine, g, 0.0, 1.0, 2.0);
  int non_nadir = 0, flagged_non_nadir = 0;
  std::vector<char> flagged(m.cells.size(), 0);
  for (int idx : m.flagged) flagged[idx] = 1;
  for (std::size_t k = 0; k < m.cells.size(); ++k) {
    if (m.cells[k].nadir_flag) continue;
    ++non_nadir;
    if (flagged[k] && m.cells[k].sigma2_residual <= 1e-6) ++flagged_non_nadir;
  }
  CHECK(non_nadir == 40 * 40);
  CHECK(flagged_non_nadir == non_nadir);
}

TEST_CASE("degeneracy_map is identical to the serial reference") {
  omp_set_num_threads(4);
  const FlightPath circ = FlightPath::circle(Vec3(0, 0, 2), 1.5);
  const GridSpec g{{-1.5, 1.5}, {-1.5, 1.5}, 37, 29};
  const DegeneracyMap a = degeneracy_map(SurfaceChart::flat_plane(), circ, g, 0.3, 1.0, 2.0);
  const DegeneracyMap b = degeneracy_map_serial(SurfaceChart::flat_plane(), circ, g, 0.3, 1.0, 2.0);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    CHECK(a.cells[k].sigma1_residual == b.cells[k].sigma1_residual);
    CHECK(a.cells[k].sigma2_residual == b.cells[k].sigma2_residual);
    CHECK(a.cells[k].minsv_piL == b.cells[k].minsv_piL);
    CHECK(a.cells[k].minsv_piR == b.cells[k].minsv_piR);
  }
  CHECK(a.flagged == b.flagged);
}
