#include "sarml/mirror_points.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace sarml {

namespace {

struct RootResult {
  Eigen::Vector2d x;
  double residual = kInf;
  bool converged = false;
};

MirrorResiduals raw_residuals(const SurfaceChart& chart, const FlightPath& path,
                              const DataCovector& p, double u, double v, double c0) {
  const Vec3 R = chart.eval(u, v).position - path.eval(p.s).position;
  const double range = R.norm();
  const Vec3 rhat = R / range;
  return {2.0 * range / c0 - p.t, 2.0 * p.tau / c0 * rhat.dot(path.eval(p.s).velocity) - p.sigma};
}

Eigen::Matrix2d raw_jacobian(const SurfaceChart& chart, const FlightPath& path,
                             const DataCovector& p, double u, double v, double c0) {
  const SurfacePoint sp = chart.eval(u, v);
  const PathPoint pp = path.eval(p.s);
  const Vec3 R = sp.position - pp.position;
  const double range = R.norm();
  const Vec3 rhat = R / range;
  const double doppler = rhat.dot(pp.velocity);
  const double k = 2.0 * p.tau / c0;
  Eigen::Matrix2d J;
  J(0, 0) = 2.0 / c0 * rhat.dot(sp.d_u);
  J(0, 1) = 2.0 / c0 * rhat.dot(sp.d_v);
  J(1, 0) = k * (sp.d_u.dot(pp.velocity) - rhat.dot(sp.d_u) * doppler) / range;
  J(1, 1) = k * (sp.d_v.dot(pp.velocity) - rhat.dot(sp.d_v) * doppler) / range;
  return J;
}

double condition_number(const Eigen::Matrix2d& J) {
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(J);
  const auto s = svd.singularValues();
  if (s(0) == 0.0) return kInf;
  return s(1) > 0.0 ? s(0) / s(1) : kInf;
}

// Minimum-norm Gauss-Newton step -J^+ g, with relative singular-value truncation.
Eigen::Vector2d newton_step(const Eigen::Matrix2d& J, const Eigen::Vector2d& g) {
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto s = svd.singularValues();
  Eigen::Vector2d step = Eigen::Vector2d::Zero();
  for (int k = 0; k < 2; ++k) {
    if (s(k) > 1e-12 * s(0) && s(k) > 0.0)
      step -= svd.matrixV().col(k) * (svd.matrixU().col(k).dot(g) / s(k));
  }
  return step;
}

// Damped Newton on the range-Doppler residuals.
RootResult solve_root(const SurfaceChart& chart, const FlightPath& path, const DataCovector& p,
                      Eigen::Vector2d x, double c0, double tol, int max_iter) {
  auto resid = [&](const Eigen::Vector2d& y) {
    const MirrorResiduals r = raw_residuals(chart, path, p, y(0), y(1), c0);
    return Eigen::Vector2d(r.g1, r.g2);
  };
  RootResult out;
  Eigen::Vector2d g = resid(x);
  double gn = g.norm();
  int polish = 0;
  for (int it = 0; it < max_iter && std::isfinite(gn); ++it) {
    if (gn <= tol && ++polish > 2) break;
    const Eigen::Vector2d dx = newton_step(raw_jacobian(chart, path, p, x(0), x(1), c0), g);
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls) {
      const Eigen::Vector2d y = x + lambda * dx;
      const Eigen::Vector2d gy = resid(y);
      if (std::isfinite(gy.norm()) && gy.norm() < gn) {
        x = y;
        g = gy;
        gn = gy.norm();
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  out.x = x;
  out.residual = gn;
  out.converged = gn <= tol;
  return out;
}

MirrorPoint make_point(const SurfaceChart& chart, const FlightPath& path, const DataCovector& p,
                       double u, double v, double c0, const CanonicalOptions& canon) {
  MirrorPoint m;
  m.q = lambda_forward(chart, path, u, v, p.s, p.tau, c0, canon).scene;
  m.report = degeneracy_report(chart, path, u, v, p.s, p.tau, c0, canon);
  m.residual = raw_residuals(chart, path, p, u, v, c0).norm();
  m.condition = condition_number(raw_jacobian(chart, path, p, u, v, c0));
  return m;
}

bool lex_less(const MirrorPoint& a, const MirrorPoint& b) {
  return a.q.u < b.q.u || (a.q.u == b.q.u && a.q.v < b.q.v);
}

}  // namespace

MirrorResiduals mirror_residuals(const SurfaceChart& chart, const FlightPath& path,
                                 const DataCovector& p, double u, double v, double c0,
                                 double range_eps) {
  const GeometryEval g = eval_geometry(chart, path, u, v, p.s, c0, range_eps);
  return {g.travel_time - p.t, 2.0 * p.tau / c0 * g.rhat.dot(g.path.velocity) - p.sigma};
}

Eigen::Matrix2d mirror_jacobian(const SurfaceChart& chart, const FlightPath& path,
                                const DataCovector& p, double u, double v, double c0) {
  (void)eval_geometry(chart, path, u, v, p.s, c0);
  return raw_jacobian(chart, path, p, u, v, c0);
}

FamilyCurve trace_family(const SurfaceChart& chart, const FlightPath& path, const DataCovector& p,
                         double u_seed, double v_seed, double c0, const Region& region,
                         const TraceOptions& options, const CanonicalOptions& canon) {
  FamilyCurve curve;
  const double target = 0.01 * options.tol;
  const RootResult seed = solve_root(chart, path, p, {u_seed, v_seed}, c0, target, options.corrector_iterations);
  if (!(seed.residual <= options.tol)) {
    curve.status = TraceStatus::corrector_failed;
    curve.diagnostic = "corrector failed at seed: residual " + std::to_string(seed.residual);
    return curve;
  }
  auto null_direction = [&](const Eigen::Vector2d& x) -> std::optional<Eigen::Vector2d> {
    const Eigen::Matrix2d J = raw_jacobian(chart, path, p, x(0), x(1), c0);
    if (condition_number(J) <= options.singular_condition) return std::nullopt;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(J, Eigen::ComputeFullV);
    return Eigen::Vector2d(svd.matrixV().col(1));
  };
  const auto n0 = null_direction(seed.x);
  if (!n0) {
    curve.status = TraceStatus::precondition_failed;
    curve.diagnostic = "residual Jacobian is nonsingular at seed: isolated root, nothing to trace";
    return curve;
  }
  if (!region.contains(seed.x(0), seed.x(1))) {
    curve.status = TraceStatus::precondition_failed;
    curve.diagnostic = "corrected seed lies outside the search region";
    return curve;
  }

  std::vector<Eigen::Vector2d> branches[2];
  int steps = 0;
  for (int b = 0; b < 2; ++b) {
    Eigen::Vector2d x = seed.x;
    Eigen::Vector2d dir = (b == 0 ? 1.0 : -1.0) * *n0;
    while (steps < options.max_steps) {
      const Eigen::Vector2d pred = x + options.step * dir;
      if (!region.contains(pred(0), pred(1))) break;
      const RootResult c = solve_root(chart, path, p, pred, c0, target, options.corrector_iterations);
      if (!(c.residual <= options.tol)) {
        curve.status = TraceStatus::corrector_failed;
        curve.diagnostic = "corrector failed after " + std::to_string(branches[b].size()) +
                           " steps; curve truncated";
        break;
      }
      if (!region.contains(c.x(0), c.x(1))) break;
      const auto n = null_direction(c.x);
      if (!n) {
        curve.status = TraceStatus::corrector_failed;
        curve.diagnostic = "family ends at a regular point; curve truncated";
        break;
      }
      dir = n->dot(dir) >= 0.0 ? *n : Eigen::Vector2d(-*n);
      if ((c.x - x).dot(dir) <= 0.0) break;  // no forward progress
      x = c.x;
      branches[b].push_back(x);
      ++steps;
    }
  }
  std::vector<Eigen::Vector2d> pts(branches[1].rbegin(), branches[1].rend());
  pts.push_back(seed.x);
  pts.insert(pts.end(), branches[0].begin(), branches[0].end());
  if (pts.size() > 1 && pts.front()(0) > pts.back()(0)) std::reverse(pts.begin(), pts.end());
  for (const auto& x : pts) {
    curve.points.push_back(make_point(chart, path, p, x(0), x(1), c0, canon));
    curve.max_residual = std::max(curve.max_residual, curve.points.back().residual);
  }
  return curve;
}

MirrorSet find_mirror_set(const SurfaceChart& chart, const FlightPath& path, const DataCovector& p,
                          const Region& region, int grid_n, double c0,
                          const MirrorOptions& options) {
  if (p.tau == 0.0) throw ConfigError("data covector needs tau != 0");
  if (grid_n < 2) throw ConfigError("mirror search grid needs grid_n >= 2");
  if (!(region.u.hi > region.u.lo) || !(region.v.hi > region.v.lo) ||
      !std::isfinite(region.u.width()) || !std::isfinite(region.v.width()))
    throw ConfigError("mirror search region must be a finite non-empty rectangle");

  MirrorSet out;
  out.p = p;
  out.region = region;
  out.grid_n = grid_n;

  const int nn = grid_n + 1;
  const double du = region.u.width() / grid_n;
  const double dv = region.v.width() / grid_n;
  auto node_u = [&](int i) { return region.u.lo + region.u.width() * i / grid_n; };
  auto node_v = [&](int j) { return region.v.lo + region.v.width() * j / grid_n; };

  // Residuals at grid nodes.
  std::vector<double> g1(static_cast<std::size_t>(nn) * nn), g2(g1.size());
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nn; ++j) {
    for (int i = 0; i < nn; ++i) {
      const auto r = raw_residuals(chart, path, p, node_u(i), node_v(j), c0);
      g1[static_cast<std::size_t>(j) * nn + i] = r.g1;
      g2[static_cast<std::size_t>(j) * nn + i] = r.g2;
    }
  }

  // Seed cells: each residual changes sign over the corners, or its smallest
  // corner magnitude is within seed_factor of its variation across the cell.
  auto qualifies = [&](const std::vector<double>& g, int i, int j) {
    const double c[4] = {g[static_cast<std::size_t>(j) * nn + i], g[static_cast<std::size_t>(j) * nn + i + 1],
                         g[static_cast<std::size_t>(j + 1) * nn + i], g[static_cast<std::size_t>(j + 1) * nn + i + 1]};
    double lo = c[0], hi = c[0], amin = std::abs(c[0]);
    for (double x : c) {
      if (!std::isfinite(x)) return false;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      amin = std::min(amin, std::abs(x));
    }
    return (lo <= 0.0 && hi >= 0.0) || amin <= options.seed_factor * (hi - lo);
  };
  std::vector<int> seeds;
  for (int j = 0; j < grid_n; ++j)
    for (int i = 0; i < grid_n; ++i)
      if (qualifies(g1, i, j) && qualifies(g2, i, j)) seeds.push_back(j * grid_n + i);
  out.seeds = static_cast<int>(seeds.size());

  std::vector<RootResult> roots(seeds.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (int k = 0; k < static_cast<int>(seeds.size()); ++k) {
    const int i = seeds[k] % grid_n, j = seeds[k] / grid_n;
    roots[k] = solve_root(chart, path, p, {node_u(i) + 0.5 * du, node_v(j) + 0.5 * dv}, c0,
                          options.tol_root, options.newton_iterations);
  }

  struct Candidate {
    Eigen::Vector2d x;
    double condition;
  };
  std::vector<Candidate> regular, singular;
  for (const auto& r : roots) {
    if (!r.converged || !region.contains(r.x(0), r.x(1)) || !chart.in_domain(r.x(0), r.x(1))) {
      ++out.discarded_seeds;
      continue;
    }
    const double cond = condition_number(raw_jacobian(chart, path, p, r.x(0), r.x(1), c0));
    (cond > options.singular_condition ? singular : regular).push_back({r.x, cond});
  }

  auto dedupe = [&](std::vector<Candidate>& c) {
    std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
      return a.x(0) < b.x(0) || (a.x(0) == b.x(0) && a.x(1) < b.x(1));
    });
    std::vector<Candidate> kept;
    for (const auto& x : c) {
      bool dup = false;
      for (const auto& k : kept)
        if ((k.x - x.x).norm() <= options.dedupe_distance) { dup = true; break; }
      if (!dup) kept.push_back(x);
    }
    c = std::move(kept);
  };
  dedupe(regular);
  dedupe(singular);

  for (const auto& c : regular)
    out.isolated.push_back(make_point(chart, path, p, c.x(0), c.x(1), c0, options.canon));

  // Connected components of singular roots, linkage two grid cells.
  const double link = 2.0 * std::hypot(du, dv);
  const int ns = static_cast<int>(singular.size());
  std::vector<int> comp(ns, -1);
  int ncomp = 0;
  for (int a = 0; a < ns; ++a) {
    if (comp[a] >= 0) continue;
    std::vector<int> stack{a};
    comp[a] = ncomp;
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      for (int b = 0; b < ns; ++b) {
        if (comp[b] < 0 && (singular[b].x - singular[k].x).norm() <= link) {
          comp[b] = ncomp;
          stack.push_back(b);
        }
      }
    }
    ++ncomp;
  }

  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> members;
    for (int k = 0; k < ns; ++k)
      if (comp[k] == c) members.push_back(k);
    if (static_cast<int>(members.size()) < options.family_min_points) {
      for (int k : members)
        out.isolated.push_back(make_point(chart, path, p, singular[k].x(0), singular[k].x(1), c0, options.canon));
      continue;
    }
    // Skip components already covered by a traced curve.
    bool covered = false;
    for (const auto& fam : out.families) {
      covered = std::all_of(members.begin(), members.end(), [&](int k) {
        return std::any_of(fam.points.begin(), fam.points.end(), [&](const MirrorPoint& m) {
          return std::hypot(m.q.u - singular[k].x(0), m.q.v - singular[k].x(1)) <= link;
        });
      });
      if (covered) break;
    }
    if (covered) continue;
    const auto& seed = singular[members.front()].x;
    FamilyCurve fam = trace_family(chart, path, p, seed(0), seed(1), c0, region, options.trace, options.canon);
    if (fam.points.empty()) {
      for (int k : members)
        out.isolated.push_back(make_point(chart, path, p, singular[k].x(0), singular[k].x(1), c0, options.canon));
      continue;
    }
    out.families.push_back(std::move(fam));
  }

  std::sort(out.isolated.begin(), out.isolated.end(), lex_less);
  std::sort(out.families.begin(), out.families.end(), [](const FamilyCurve& a, const FamilyCurve& b) {
    return lex_less(a.points.front(), b.points.front());
  });
  return out;
}

Region visible_bounding_box(const SurfaceChart& chart, const FlightPath& path,
                            const AcquisitionWindow& window, int scan_n) {
  window.validate();
  const double reach = 0.5 * window.c0 * window.t.hi;
  double xlo = kInf, xhi = -kInf, ylo = kInf, yhi = -kInf;
  const double s1 = std::max(window.s.lo, path.s_range().lo);
  const double s2 = std::min(window.s.hi, path.s_range().hi);
  for (int k = 0; k <= 256; ++k) {
    const Vec3 g = path.eval(s1 + (s2 - s1) * k / 256.0).position;
    xlo = std::min(xlo, g.x());
    xhi = std::max(xhi, g.x());
    ylo = std::min(ylo, g.y());
    yhi = std::max(yhi, g.y());
  }
  Region box;
  box.v = {std::max(ylo - reach, chart.v_domain().lo), std::min(yhi + reach, chart.v_domain().hi)};
  if (chart.kind() == SurfaceChart::Kind::cylinder)
    box.u = chart.u_domain();
  else
    box.u = {std::max(xlo - reach, chart.u_domain().lo), std::min(xhi + reach, chart.u_domain().hi)};

  // Tighten to the visible nodes of a scan, padded by one scan cell.
  double ulo = kInf, uhi = -kInf, vlo = kInf, vhi = -kInf;
  const double su = box.u.width() / scan_n, sv = box.v.width() / scan_n;
  for (int j = 0; j <= scan_n; ++j) {
    for (int i = 0; i <= scan_n; ++i) {
      const double u = box.u.lo + box.u.width() * i / scan_n;
      const double v = box.v.lo + box.v.width() * j / scan_n;
      if (!in_visible_set(chart, path, window, u, v)) continue;
      ulo = std::min(ulo, u);
      uhi = std::max(uhi, u);
      vlo = std::min(vlo, v);
      vhi = std::max(vhi, v);
    }
  }
  if (ulo > uhi) return box;
  return {{std::max(ulo - su, box.u.lo), std::min(uhi + su, box.u.hi)},
          {std::max(vlo - sv, box.v.lo), std::min(vhi + sv, box.v.hi)}};
}

}  // namespace sarml
