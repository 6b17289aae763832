#include "sarml/smoothness.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>

namespace sarml {

namespace {

// Longest run of unmasked cells in row it; returns [begin, end).
std::pair<int, int> longest_run(const Sinogram& sg, int it) {
  int best_b = 0, best_e = 0, b = -1;
  for (int is = 0; is <= sg.n_s; ++is) {
    const bool ok = is < sg.n_s && !sg.masked(is, it) && std::isfinite(sg.at(is, it));
    if (ok && b < 0) b = is;
    if (!ok && b >= 0) {
      if (is - b > best_e - best_b) {
        best_b = b;
        best_e = is;
      }
      b = -1;
    }
  }
  return {best_b, best_e};
}

double field_scale(const Sinogram& sg) {
  double m = 0.0;
  for (std::size_t k = 0; k < sg.values.size(); ++k)
    if (!sg.mask[k] && std::isfinite(sg.values[k])) m = std::max(m, std::abs(sg.values[k]));
  return m;
}

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwPlan {
  int n;
  double* in;
  fftw_complex* out;
  fftw_plan plan;

  explicit FftwPlan(int n_) : n(n_) {
    std::lock_guard lock(planner_mutex());
    in = fftw_alloc_real(n);
    out = fftw_alloc_complex(n / 2 + 1);
    plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
};

}  // namespace

double highfreq_ratio(const Sinogram& sg, int min_samples, int* rows_used) {
  double total = 0.0;
  int used = 0, eligible = 0;
  std::unique_ptr<FftwPlan> plan;
  for (int it = 0; it < sg.n_t; ++it) {
    const auto [b, e] = longest_run(sg, it);
    const int n = e - b;
    if (n < min_samples) continue;
    ++eligible;
    if (!plan || plan->n != n) plan = std::make_unique<FftwPlan>(n);
    for (int k = 0; k < n; ++k) {
      const double w = 0.5 * (1.0 - std::cos(2.0 * M_PI * k / (n - 1)));
      plan->in[k] = w * sg.at(b + k, it);
    }
    fftw_execute(plan->plan);
    double all = 0.0, high = 0.0;
    for (int k = 0; k <= n / 2; ++k) {
      const double energy = plan->out[k][0] * plan->out[k][0] + plan->out[k][1] * plan->out[k][1];
      all += energy;
      if (4 * k > n) high += energy;
    }
    if (all > 0.0) {
      total += high / all;
      ++used;
    }
  }
  if (eligible == 0) throw DomainError("smoothness score undefined: no row has enough unmasked samples");
  if (rows_used) *rows_used = used;
  return used > 0 ? total / used : 0.0;
}

double max_cell_jump(const Sinogram& sg) {
  const double scale = field_scale(sg);
  if (scale == 0.0) return 0.0;
  double m = 0.0;
  for (int it = 0; it < sg.n_t; ++it)
    for (int is = 0; is + 1 < sg.n_s; ++is) {
      if (sg.masked(is, it) || sg.masked(is + 1, it)) continue;
      m = std::max(m, std::abs(sg.at(is + 1, it) - sg.at(is, it)));
    }
  return m / scale;
}

Sinogram gaussian_calibration_field(const Sinogram& like) {
  Sinogram g(like.window, like.n_s, like.n_t);
  const double sc = 0.5 * (like.window.s.lo + like.window.s.hi);
  const double tc = 0.5 * (like.window.t.lo + like.window.t.hi);
  const double ws = like.window.s.width() / 6.0, wt = like.window.t.width() / 6.0;
  for (int it = 0; it < g.n_t; ++it)
    for (int is = 0; is < g.n_s; ++is) {
      const double a = (g.s_at(is) - sc) / ws, b = (g.t_at(it) - tc) / wt;
      g.at(is, it) = std::exp(-0.5 * (a * a + b * b));
    }
  return g;
}

SmoothnessScore smoothness_score(const Sinogram& sinogram, const SmoothnessOptions& options) {
  SmoothnessScore sc;
  sc.highfreq_ratio = highfreq_ratio(sinogram, options.min_samples, &sc.rows_used);
  sc.max_cell_jump = max_cell_jump(sinogram);

  const Sinogram cal = gaussian_calibration_field(sinogram);
  sc.ratio_threshold = std::max(options.ratio_factor * highfreq_ratio(cal, options.min_samples), options.ratio_floor);
  sc.jump_threshold = options.jump_factor * max_cell_jump(cal);

  const double scale = field_scale(sinogram);
  const double ref = options.reference_scale > 0.0 ? options.reference_scale : scale;
  sc.below_floor = scale <= options.zero_floor * ref;
  const bool smooth = sc.below_floor ||
                      (sc.highfreq_ratio <= sc.ratio_threshold && sc.max_cell_jump <= sc.jump_threshold);
  sc.verdict = smooth ? Verdict::smooth : Verdict::singular;
  return sc;
}

JumpReport jump_detect(const Sinogram& sg, const std::function<std::vector<double>(double)>& curve,
                       double jump_factor, double reference_scale) {
  JumpReport rep;
  const double own = field_scale(sg);
  const double scale = reference_scale > 0.0 ? reference_scale : own;
  const double ds = sg.n_s > 1 ? sg.window.s.width() / (sg.n_s - 1) : 0.0;
  for (int it = 0; it < sg.n_t; ++it) {
    JumpRow row;
    row.it = it;
    row.t = sg.t_at(it);
    int best = -1;
    for (int is = 0; is + 1 < sg.n_s; ++is) {
      if (sg.masked(is, it) || sg.masked(is + 1, it)) continue;
      const double d = std::abs(sg.at(is + 1, it) - sg.at(is, it));
      if (best < 0 || d > row.magnitude) {
        row.magnitude = d;
        best = is;
      }
    }
    if (best < 0) continue;
    row.location = 0.5 * (sg.s_at(best) + sg.s_at(best + 1));
    for (double c : curve(row.t))
      if (std::abs(row.location - c) <= ds) row.matched = true;
    ++rep.rows_considered;
    if (row.matched) ++rep.rows_matched;
    if (scale > 0.0) rep.max_jump = std::max(rep.max_jump, row.magnitude / scale);
    rep.rows.push_back(row);
  }
  rep.match_fraction = rep.rows_considered > 0 ? static_cast<double>(rep.rows_matched) / rep.rows_considered : 0.0;
  rep.jump_threshold = jump_factor * max_cell_jump(gaussian_calibration_field(sg));
  rep.significant = rep.max_jump > rep.jump_threshold;
  return rep;
}

}  // namespace sarml
