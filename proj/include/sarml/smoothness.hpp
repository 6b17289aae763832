#pragma once

// Grid-scale smoothness proxies for simulated data. These are evidence at the
// sampling scale, not a certificate that a wavefront set is empty.

#include <functional>
#include <vector>

#include "sarml/scene.hpp"

namespace sarml {

enum class Verdict { smooth, singular };

struct SmoothnessOptions {
  // Data whose max-abs is at most zero_floor * reference_scale is numerically
  // zero and therefore smooth. reference_scale <= 0 means the field's own scale.
  double reference_scale = 0.0;
  double zero_floor = 1e-9;
  double ratio_factor = 3.0;  // threshold = factor * Gaussian calibration value
  double jump_factor = 3.0;
  double ratio_floor = 1e-12;  // keeps roundoff in the calibration from setting the bar
  int min_samples = 32;
};

struct SmoothnessScore {
  double highfreq_ratio = 0.0;
  double max_cell_jump = 0.0;  // largest |first difference in s| / field scale
  double ratio_threshold = 0.0;
  double jump_threshold = 0.0;
  bool below_floor = false;
  int rows_used = 0;
  Verdict verdict = Verdict::smooth;
};

// Spectral ratio of Hann-windowed s-slices (energy above a quarter of the
// sampling rate over total), averaged over t-rows. Throws DomainError when no
// row has min_samples contiguous unmasked values.
SmoothnessScore smoothness_score(const Sinogram& sinogram, const SmoothnessOptions& options = {});

// Raw measures without thresholds or verdict.
double highfreq_ratio(const Sinogram& sinogram, int min_samples = 32, int* rows_used = nullptr);
double max_cell_jump(const Sinogram& sinogram);

// Sampled Gaussian on the sinogram's grid, used to calibrate thresholds.
Sinogram gaussian_calibration_field(const Sinogram& like);

struct JumpRow {
  int it = 0;
  double t = 0.0;
  double location = 0.0;  // midpoint of the largest first difference in s
  double magnitude = 0.0;
  bool matched = false;
};

struct JumpReport {
  std::vector<JumpRow> rows;
  int rows_considered = 0;
  int rows_matched = 0;
  double match_fraction = 0.0;
  double max_jump = 0.0;        // normalized like SmoothnessScore::max_cell_jump
  double jump_threshold = 0.0;  // from the Gaussian calibration field
  bool significant = false;
};

// For each unmasked t-row, the largest first difference in s is compared with
// the candidate jump loci curve(t); a row matches within one s cell. Jumps are
// normalized by reference_scale when positive, else by the field's own max-abs.
JumpReport jump_detect(const Sinogram& sinogram,
                       const std::function<std::vector<double>(double)>& curve,
                       double jump_factor = 3.0, double reference_scale = 0.0);

}  // namespace sarml
