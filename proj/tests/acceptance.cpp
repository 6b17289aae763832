// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ...]   (default: all)

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sarml/cancellation.hpp"
#include "sarml/canonical_relation.hpp"
#include "sarml/io.hpp"
#include "sarml/mirror_points.hpp"
#include "sarml/scenario.hpp"

using namespace sarml;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kClosedFormBase = 1e-2;
constexpr double kClosedFormRefined = 1e-3;
constexpr double kRuntimeBudget = 60.0;
constexpr double kCancelQuadrature = 1e-3;
constexpr double kMirrorBase = 1e-8;
constexpr double kMirrorRoundTrip = 1e-8;
constexpr double kFamilyV = 1e-8;
constexpr double kFamilyXi = 1e-8;
constexpr int kFamilyMinPoints = 50;
constexpr double kRankEps = 1e-6;
constexpr double kParallelEps = 1e-6;
constexpr double kSymmetricCancel = 1e-9;
constexpr double kExactRel = 1e-12;

const FlightPath kLine = FlightPath::straight_line(Vec3(0, 0, 1), Vec3::UnitY());
const SurfaceChart kCyl = SurfaceChart::cylinder();
const SurfaceChart kFlat = SurfaceChart::flat_plane();
const AcquisitionWindow kCylWin{{-3, 3}, {1.1, 3}, 2.0};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", x);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Max relative error against the closed form; cells where it vanishes are
// compared relative to the largest closed-form value.
double closed_form_error(const Sinogram& sg) {
  double peak = 0.0;
  for (int it = 0; it < sg.n_t; ++it)
    for (int is = 0; is < sg.n_s; ++is)
      if (!sg.masked(is, it)) peak = std::max(peak, oracle::cylinder_data(sg.s_at(is), sg.t_at(it), 2.0, 2.0));
  double err = 0.0;
  for (int it = 0; it < sg.n_t; ++it)
    for (int is = 0; is < sg.n_s; ++is) {
      if (sg.masked(is, it)) continue;
      const double c = oracle::cylinder_data(sg.s_at(is), sg.t_at(it), 2.0, 2.0);
      err = std::max(err, std::abs(sg.at(is, it) - c) / (c != 0.0 ? c : peak));
    }
  return err;
}

Outcome c1_closed_form() {
  omp_set_num_threads(1);
  auto f = [](double u) { return std::sin(u); };
  const auto t0 = std::chrono::steady_clock::now();
  const SceneField base = heaviside_scene(kCyl, {0, M_PI}, 400, {-6, 6}, 400, f);
  const Sinogram sg = forward_sinogram(base, {}, kLine, kCylWin, 121, 96);
  const double runtime = seconds_since(t0);
  const double e1 = closed_form_error(sg);

  omp_set_num_threads(omp_get_num_procs());
  const SceneField fine = heaviside_scene(kCyl, {0, M_PI}, 1600, {-6, 6}, 1600, f);
  const double e4 = closed_form_error(forward_sinogram(fine, {}, kLine, kCylWin, 121, 96));
  return {e1 <= kClosedFormBase && e4 <= kClosedFormRefined && runtime <= kRuntimeBudget,
          "400x400 max_rel_err=" + fmt(e1) + " (<= 1e-2), 1600x1600 max_rel_err=" + fmt(e4) +
              " (<= 1e-3), single-thread runtime=" + fmt(runtime) + " s (<= 60), unmasked=" +
              std::to_string(sg.unmasked_count())};
}

Outcome c2_cancellation() {
  const CylinderDemoGrids g{400, 400, {-6, 6}, 121, 96};
  const CylinderDemoResult r = cylinder_cancellation_demo([](double u) { return std::sin(2 * u); }, kCylWin, g,
                                                          kCancelQuadrature);
  // The scene keeps its full jump: across v = 0 it equals max |sin 2u| over the cell centres.
  const SceneField sc = heaviside_scene(kCyl, {0, M_PI}, 400, {-6, 6}, 400, [](double u) { return std::sin(2 * u); });
  double fmax = 0.0;
  for (int i = 0; i < 400; ++i) fmax = std::max(fmax, std::abs(std::sin(2 * sc.u_center(i))));
  const SceneJump j = scene_jump(sc);
  const bool jump_ok = std::abs(j.jump - fmax) <= 1e-15 && j.jump > 10 * j.baseline;
  const bool verdicts = r.report.residual_smoothness.verdict == Verdict::smooth &&
                        r.report.reference_smoothness.verdict == Verdict::singular;
  return {r.report.ratio <= kCancelQuadrature && jump_ok && verdicts,
          "ratio=" + fmt(r.report.ratio) + " (<= 1e-3), scene jump=" + fmt(j.jump) + " vs max|f|=" + fmt(fmax) +
              " baseline=" + fmt(j.baseline) + ", residual " +
              (r.report.residual_smoothness.verdict == Verdict::smooth ? "smooth" : "singular") + ", reference " +
              (r.report.reference_smoothness.verdict == Verdict::smooth ? "smooth" : "singular")};
}

Outcome c3_mirror_pairs() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> U(0.2, 1.8), V(-1, 1), S(-1, 1), T(0.2, 5);
  double base_err = 0.0, trip_err = 0.0;
  int wrong_count = 0;
  for (int k = 0; k < 100; ++k) {
    const double tau = (rng() % 2 ? 1.0 : -1.0) * T(rng);
    const double u = U(rng), v = V(rng), s = S(rng);
    const DataCovector p{s, 2.0 * std::sqrt(u * u + (v - s) * (v - s) + 1.0) / 2.0,
                         2.0 * tau / 2.0 * (v - s) / std::sqrt(u * u + (v - s) * (v - s) + 1.0), tau};
    const auto expect = oracle::flat_mirror_pair(p.s, p.t, p.sigma, p.tau, 1.0, 2.0);
    const MirrorSet m = find_mirror_set(kFlat, kLine, p, {{-3, 3}, {-3, 3}}, 120, 2.0);
    if (m.isolated.size() != 2 || !m.families.empty() || expect.size() != 2) {
      ++wrong_count;
      continue;
    }
    for (int i = 0; i < 2; ++i) {
      const SceneCovector& q = m.isolated[i].q;
      base_err = std::max({base_err, std::abs(q.u - expect[i][0]), std::abs(q.v - expect[i][1])});
      const DataCovector b = lambda_forward(kFlat, kLine, q.u, q.v, p.s, p.tau, 2.0).data;
      const double scale = std::abs(p.tau);
      trip_err = std::max({trip_err, std::abs(b.s - p.s), std::abs(b.t - p.t) / p.t,
                           std::abs(b.sigma - p.sigma) / scale, std::abs(b.tau - p.tau) / scale});
    }
  }
  return {wrong_count == 0 && base_err <= kMirrorBase && trip_err <= kMirrorRoundTrip,
          "100 covectors, wrong solution count=" + std::to_string(wrong_count) + ", base error=" + fmt(base_err) +
              " (<= 1e-8), round trip=" + fmt(trip_err) + " (<= 1e-8)"};
}

Outcome c4_mirror_family() {
  const DataCovector p{0.0, std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.0};
  const MirrorSet m = find_mirror_set(kCyl, kLine, p, {{0, M_PI}, {-3, 3}}, 100, 2.0);
  double dv = 0.0, xi = 0.0;
  int not_sigma2 = 0;
  std::size_t points = 0;
  if (m.families.size() == 1) {
    points = m.families[0].points.size();
    for (const MirrorPoint& q : m.families[0].points) {
      dv = std::max(dv, std::abs(q.q.v - 1.0));
      xi = std::max(xi, std::abs(q.q.xi));
      not_sigma2 += q.report.sigma2_residual > kParallelEps;
    }
  }
  return {m.isolated.empty() && m.families.size() == 1 && points >= kFamilyMinPoints && dv <= kFamilyV &&
              xi <= kFamilyXi && not_sigma2 == 0,
          "isolated=" + std::to_string(m.isolated.size()) + ", families=" + std::to_string(m.families.size()) +
              ", points=" + std::to_string(points) + " (>= 50), max|v-1|=" + fmt(dv) + ", max|xi|=" + fmt(xi) +
              ", non-Sigma2 members=" + std::to_string(not_sigma2)};
}

Outcome c5_degeneracy() {
  // Flat plane, straight path overhead.
  const GridSpec gf{{-2, 2}, {-2, 2}, 101, 101};
  const DegeneracyMap mf = degeneracy_map(kFlat, kLine, gf, 0.0, 1.0, 2.0, kParallelEps);
  const double step = gf.u_step();
  int outside_strip = 0, flagged_minsv_bad = 0;
  std::vector<int> rows(gf.n_v, 0);
  double worst_flag = 0.0;
  auto flagged_ok = [&](const DegeneracyReport& c) {
    if (c.sigma1_residual <= kParallelEps) worst_flag = std::max(worst_flag, c.minsv_piL);
    if (c.sigma2_residual <= kParallelEps) worst_flag = std::max(worst_flag, c.minsv_piR);
    return (c.sigma1_residual > kParallelEps || c.minsv_piL <= kRankEps) &&
           (c.sigma2_residual > kParallelEps || c.minsv_piR <= kRankEps);
  };
  for (int idx : mf.flagged) {
    const int i = idx % gf.n_u;
    outside_strip += std::abs(gf.u_at(i)) > step * (1 + 1e-12);
    ++rows[idx / gf.n_u];
    flagged_minsv_bad += !flagged_ok(mf.cells[idx]);
  }
  int rows_missing = 0;
  for (int r : rows) rows_missing += r == 0;
  const GraphThresholds th = calibrate_graph_threshold(mf);
  int graph_bad = 0, graph_cells = 0;
  for (const DegeneracyReport& c : mf.cells)
    if (c.sigma1_residual >= 0.1 && c.sigma2_residual >= 0.1) {
      ++graph_cells;
      graph_bad += !(c.minsv_piL > th.piL && c.minsv_piR > th.piR);
    }

  // Cylinder, axial path.
  const GridSpec gc{{0.05, M_PI - 0.05}, {-2, 2}, 101, 101};
  const DegeneracyMap mc = degeneracy_map(kCyl, kLine, gc, 0.0, 1.0, 2.0, kParallelEps);
  std::vector<char> flag(mc.cells.size(), 0);
  for (int idx : mc.flagged) {
    flag[idx] = 1;
    flagged_minsv_bad += !flagged_ok(mc.cells[idx]);
  }
  int non_nadir = 0, via_sigma2 = 0;
  for (std::size_t k = 0; k < mc.cells.size(); ++k) {
    if (mc.cells[k].nadir_flag) continue;
    ++non_nadir;
    via_sigma2 += flag[k] && mc.cells[k].sigma2_residual <= kParallelEps;
  }
  const bool pass = outside_strip == 0 && rows_missing == 0 && !mf.flagged.empty() && flagged_minsv_bad == 0 &&
                    graph_bad == 0 && graph_cells > 0 && non_nadir > 0 && via_sigma2 == non_nadir;
  return {pass, "flat: flagged=" + std::to_string(mf.flagged.size()) + " outside |u|<=step=" +
                    std::to_string(outside_strip) + " rows without a flag=" + std::to_string(rows_missing) +
                    ", graph-type cells=" + std::to_string(graph_cells) + " below eps_graph=" +
                    std::to_string(graph_bad) + "; cylinder: Sigma2-flagged " + std::to_string(via_sigma2) + "/" +
                    std::to_string(non_nadir) + " non-nadir; flagged cells with minsv > 1e-6: " +
                    std::to_string(flagged_minsv_bad) + " (worst minsv " + fmt(worst_flag) + ")"};
}

// Random singular scene: smooth bumps cut by random half-planes, plus a step.
std::function<double(double, double)> random_singular(std::mt19937_64& rng, Interval u, Interval v) {
  std::uniform_real_distribution<double> U(u.lo + 0.3 * u.width(), u.hi), V(v.lo + 0.2 * v.width(), v.hi - 0.2 * v.width()),
      A(-1, 1), R(0.4, 0.9), C(0.5, 2);
  struct Piece {
    double cu, cv, r, c, nu, nv, off;
  };
  std::vector<Piece> pieces;
  for (int k = 0; k < 3; ++k) pieces.push_back({U(rng), V(rng), R(rng), C(rng), A(rng), A(rng), 0.3 * A(rng)});
  const double step_v = V(rng), step_c = C(rng);
  return [=](double x, double y) {
    double val = 0.0;
    for (const Piece& p : pieces) {
      const double q = ((x - p.cu) * (x - p.cu) + (y - p.cv) * (y - p.cv)) / (p.r * p.r);
      if (q >= 1.0) continue;
      const double side = p.nu * (x - p.cu) + p.nv * (y - p.cv) - p.off;
      val += p.c * std::exp(1.0 - 1.0 / (1.0 - q)) * (side >= 0 ? 1.0 : 0.0);
    }
    const double mid = 0.5 * (u.lo + u.hi);
    if (x > mid + 0.25 * u.width() && y >= step_v) val += 0.5 * step_c;
    return val;
  };
}

Outcome c6_symmetric() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  int degenerate = 0, cases = 0;
  struct Setup {
    Isometry iso;
    const SurfaceChart* chart;
    Interval u, v;
    AcquisitionWindow w;
  };
  const Setup setups[] = {{Isometry::flat_reflect, &kFlat, {-2, 2}, {-2, 2}, {{-2, 2}, {1.05, 3}, 2.0}},
                          {Isometry::cylinder_reflect, &kCyl, {0, M_PI}, {-3, 3}, {{-3, 3}, {1.1, 3}, 2.0}}};
  for (const Setup& st : setups)
    for (int k = 0; k < 10; ++k) {
      const auto f = random_singular(rng, st.u, st.v);
      for (int n : {60, 120}) {
        const SceneField v1 = SceneField::sample(*st.chart, st.u, st.v, n, n, f);
        const SymmetricResult r = symmetric_cancellation(*st.chart, kLine, v1, st.iso, st.w, 41, 40);
        ++cases;
        degenerate += r.report.degenerate_reference;
        worst = std::max(worst, r.report.ratio);
      }
    }
  return {degenerate == 0 && worst <= kSymmetricCancel,
          std::to_string(cases) + " cases (10 random V1 x 2 isometries x 2 resolutions), worst ratio=" + fmt(worst) +
              " (<= 1e-9), degenerate references=" + std::to_string(degenerate)};
}

Outcome c7_homogeneity_linearity() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> X(-1, 1), L(0.01, 100), T(0.1, 10);
  std::vector<double> hf(9 * 9);
  for (auto& h : hf) h = 0.2 * X(rng);
  const SurfaceChart charts[] = {kFlat, kCyl, SurfaceChart::height_field(BicubicGrid({-2, 2}, {-2, 2}, 9, 9, hf))};
  const FlightPath paths[] = {kLine, FlightPath::straight_line(Vec3(0.3, -1, 2.5), Vec3(0.2, 1, 0.05)),
                              FlightPath::circle(Vec3(0, 0, 3), 2.0)};
  double hom = 0.0;
  int exact_mismatch = 0;
  for (int k = 0; k < 1000; ++k) {
    const SurfaceChart& ch = charts[k % 3];
    const FlightPath& pa = paths[(k / 3) % 3];
    const double u = ch.kind() == SurfaceChart::Kind::cylinder ? 1.5 + 1.4 * X(rng) : 1.9 * X(rng);
    const double v = 1.9 * X(rng), s = 2 * X(rng), tau = (X(rng) < 0 ? -1 : 1) * T(rng);
    const double lam = k % 4 == 0 ? std::ldexp(1.0, static_cast<int>(8 * X(rng))) : L(rng);
    const CovectorPair a = lambda_forward(ch, pa, u, v, s, tau, 2.0);
    const CovectorPair b = lambda_forward(ch, pa, u, v, s, lam * tau, 2.0);
    exact_mismatch += a.data.s != b.data.s || a.data.t != b.data.t || a.scene.u != b.scene.u || a.scene.v != b.scene.v;
    const double scale = std::abs(lam * tau) * 2.0 / 2.0;
    hom = std::max({hom, std::abs(b.data.sigma - lam * a.data.sigma) / scale,
                    std::abs(b.data.tau - lam * a.data.tau) / scale, std::abs(b.scene.xi - lam * a.scene.xi) / scale,
                    std::abs(b.scene.eta - lam * a.scene.eta) / scale});
  }

  std::vector<double> v1(60 * 60), v2(60 * 60);
  for (auto& x : v1) x = X(rng);
  for (auto& x : v2) x = X(rng) * (X(rng) > 0);
  const SceneField A(kCyl, {0, M_PI}, {-3, 3}, 60, 60, v1), B(kCyl, {0, M_PI}, {-3, 3}, 60, 60, v2);
  const SceneField Af(kFlat, {-2, 2}, {-2, 2}, 60, 60, v1), Bf(kFlat, {-2, 2}, {-2, 2}, 60, 60, v2);
  double lin = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const bool flat = k % 2;
    const SceneField& P = flat ? Af : A;
    const SceneField& Q = flat ? Bf : B;
    const double a = 5 * X(rng), b = 5 * X(rng), s = 2 * X(rng), t = 2.0 + 0.9 * X(rng);
    const SceneField C = P.scaled(a) + Q.scaled(b);
    double fa, fb, fc;
    if (k % 4 < 2) {
      fa = delta_shell_forward(P, {}, kLine, s, t, 2.0).value;
      fb = delta_shell_forward(Q, {}, kLine, s, t, 2.0).value;
      fc = delta_shell_forward(C, {}, kLine, s, t, 2.0).value;
    } else {
      fa = bandlimited_forward(P, {}, kLine, s, t, 60, 513, 2.0);
      fb = bandlimited_forward(Q, {}, kLine, s, t, 60, 513, 2.0);
      fc = bandlimited_forward(C, {}, kLine, s, t, 60, 513, 2.0);
    }
    const double scale = std::abs(a * fa) + std::abs(b * fb);
    if (scale > 0.0) lin = std::max(lin, std::abs(fc - a * fa - b * fb) / scale);
  }
  return {hom <= kExactRel && exact_mismatch == 0 && lin <= kExactRel,
          "homogeneity: 1000 evals, max rel=" + fmt(hom) + " (<= 1e-12), base-point mismatches=" +
              std::to_string(exact_mismatch) + "; linearity: 1000 evals (delta-shell and band-limited), max rel=" +
              fmt(lin) + " (<= 1e-12)"};
}

Outcome c8_mode_consistency() {
  // Probe points fixed before any measurement.
  const std::array<std::array<double, 2>, 5> probes = {{{0.0, 2.0}, {0.5, 1.8}, {-0.5, 2.5}, {1.0, 2.2}, {0.0, 1.5}}};
  const double omegas[3] = {25, 100, 400};
  const SceneField sc = heaviside_scene(kCyl, {0, M_PI}, 32, {-6, 6}, 6000, [](double u) { return std::sin(u); });
  std::string detail;
  int monotone = 0;
  std::array<double, 3> worst{};
  for (const auto& pt : probes) {
    const double ref = delta_shell_forward(sc, {}, kLine, pt[0], pt[1], 2.0).value;
    double e[3];
    for (int k = 0; k < 3; ++k) {
      e[k] = std::abs(bandlimited_forward(sc, {}, kLine, pt[0], pt[1], omegas[k], 4097, 2.0) - ref) / std::abs(ref);
      worst[k] = std::max(worst[k], e[k]);
    }
    const bool ok = e[1] < e[0] && e[2] < e[1];
    monotone += ok;
    char b[160];
    std::snprintf(b, sizeof b, " (%g,%g): %.2e, %.2e, %.2e %s;", pt[0], pt[1], e[0], e[1], e[2], ok ? "ok" : "NOT monotone");
    detail += b;
  }
  char b[160];
  std::snprintf(b, sizeof b, " [info] max over points: %.2e, %.2e, %.2e", worst[0], worst[1], worst[2]);
  return {monotone == 5, "monotone at " + std::to_string(monotone) + "/5 probes, rel err at Omega=25,100,400:" +
                             detail + b};
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

Outcome c9_determinism() {
  const std::string cfg_text = R"({
    "version": 1, "tag": "det",
    "surface": {"type": "cylinder"},
    "path": {"type": "straight", "origin": [0, 0, 1], "direction": [0, 1, 0]},
    "window": {"s": [-3, 3], "t": [1.1, 3], "c0": 2},
    "scene": {"type": "heaviside", "profile": {"name": "sin", "k": 1}, "v_jump": 0},
    "grids": {"u": [0, 3.141592653589793], "v": [-6, 6], "n_u": 160, "n_v": 160, "n_s": 61, "n_t": 48,
              "omega": 60, "n_omega": 513},
    "analyses": [
      {"type": "simulate", "tag": "delta", "check_closed_form": true},
      {"type": "simulate", "tag": "band", "mode": "band_limited"},
      {"type": "mirrors", "tag": "family", "p": [0, 1.4142135623730951, 0.70710678118654757, 1],
       "region": {"u": [0, 3.141592653589793], "v": [-3, 3]}, "grid_n": 80},
      {"type": "degeneracy", "tag": "map", "grid": {"u": [0.05, 3.09], "v": [-2, 2], "n_u": 41, "n_v": 41}},
      {"type": "cancel", "tag": "heaviside", "isometry": "cylinder-heaviside"},
      {"type": "cancel", "tag": "reflect", "isometry": "cylinder-reflect"},
      {"type": "selftest", "tag": "deriv"}
    ]
  })";
  const ScenarioConfig cfg = parse_config(cfg_text, "det.json");
  const fs::path root = fs::path(SARML_TEST_TMP) / "determinism";
  fs::remove_all(root);
  std::vector<std::map<std::string, std::string>> runs;
  const int threads[3] = {1, 1, 4};
  for (int k = 0; k < 3; ++k) {
    omp_set_num_threads(threads[k]);
    RunOptions opt;
    opt.svg = true;
    opt.json = true;
    opt.out_dir = root / ("run" + std::to_string(k));
    std::ostringstream log;
    run_scenario(cfg, opt, log);
    runs.push_back(read_dir(*opt.out_dir));
  }
  int differing = 0;
  for (int k = 1; k < 3; ++k) {
    if (runs[k].size() != runs[0].size()) ++differing;
    for (const auto& [name, body] : runs[0]) {
      const auto it = runs[k].find(name);
      differing += it == runs[k].end() || it->second != body;
    }
  }
  return {differing == 0 && runs[0].size() > 10,
          std::to_string(runs[0].size()) + " artifacts; two runs at 1 thread and one at 4 threads; differing=" +
              std::to_string(differing)};
}

struct Criterion {
  const char* name;
  Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {"C1 closed-form reproduction", c1_closed_form},
    {"C2 cylinder cancellation", c2_cancellation},
    {"C3 flat mirror pairs", c3_mirror_pairs},
    {"C4 cylinder mirror family", c4_mirror_family},
    {"C5 degenerate sets", c5_degeneracy},
    {"C6 symmetric mirror-pair cancellation", c6_symmetric},
    {"C7 conic homogeneity and linearity", c7_homogeneity_linearity},
    {"C8 band-limited mode consistency", c8_mode_consistency},
    {"C9 determinism", c9_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> pick;
  for (int a = 1; a < argc; ++a) pick.push_back(std::atoi(argv[a]));
  if (pick.empty())
    for (int k = 1; k <= 9; ++k) pick.push_back(k);
  int failed = 0;
  for (int k : pick) {
    if (k < 1 || k > 9) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 1;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = kCriteria[k - 1].fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", kCriteria[k - 1].name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
