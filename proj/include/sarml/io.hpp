#pragma once

// Text artifacts: CSV (17 significant digits, "nan" for masked cells), SVG
// grayscale heat maps, JSON reports, and SHA-256 content hashes. Writers
// return the document as a string; the caller decides where it goes.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sarml/cancellation.hpp"
#include "sarml/mirror_points.hpp"

namespace sarml {

// "%.17g" without locale dependence; non-finite values become "nan", "inf", "-inf".
std::string format_double(double x);

std::string sinogram_csv(const Sinogram& sg);
std::string degeneracy_csv(const DegeneracyMap& map);
// One row per solution; family_id is -1 for isolated points.
std::string mirrors_csv(const MirrorSet& set);
std::string mirrors_summary(const MirrorSet& set);
std::string jumps_csv(const JumpReport& report);

// Row-major grid (n_y rows of n_x values, row 0 at the bottom). NaN cells are
// left unpainted.
struct HeatMap {
  int n_x = 0;
  int n_y = 0;
  std::vector<double> values;  // index iy * n_x + ix
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
};
std::string heatmap_svg(const HeatMap& map);
HeatMap sinogram_heatmap(const Sinogram& sg, const std::string& title);

// CSV grid of V samples: n_v lines (increasing v) of n_u comma-separated values.
// Blank lines and lines starting with '#' are skipped. ConfigError names the line.
SceneField read_scene_csv(const std::filesystem::path& file, const SurfaceChart& chart, Interval u,
                          Interval v);

nlohmann::ordered_json to_json(const SmoothnessScore& score);
nlohmann::ordered_json to_json(const CancellationReport& report);
nlohmann::ordered_json to_json(const JumpReport& report);

std::string sha256_hex(const std::string& bytes);

}  // namespace sarml
