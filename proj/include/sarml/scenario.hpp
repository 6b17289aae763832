#pragma once

// Scenario configs (versioned JSON) and the batch runner behind `sarml run`.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sarml/cancellation.hpp"
#include "sarml/mirror_points.hpp"

namespace sarml {

inline constexpr int kConfigVersion = 1;

// Every numeric tolerance used by the modules, with its default.
struct Tolerances {
  double range_eps = kDefaultRangeEps;
  double nadir_eps = 1e-8;
  double fd_step = 1e-5;
  double parallel_eps = 1e-6;
  double graph_fraction = 0.01;
  double minsv_flag = 1e-6;
  double tol_root = 1e-10;
  double singular_condition = 1e8;
  double seed_factor = 10.0;
  double dedupe_distance = 1e-6;
  int family_min_points = 8;
  double trace_step = 0.02;
  double trace_tol = 1e-8;
  int trace_max_steps = 10000;
  double critical_grad_eps = 1e-9;
  double alpha_guard = 0.05;
  double tol_cancel_quadrature = 1e-3;
  double tol_cancel_exact = 1e-9;
  double smooth_ratio_factor = 3.0;
  double smooth_jump_factor = 3.0;
  double smooth_ratio_floor = 1e-12;
  double zero_floor = 1e-9;
  int smooth_min_samples = 32;
  double jump_match_fraction = 0.95;
  double closed_form_rel = 0.01;
  double selftest_tol = 1e-6;
  int visible_samples = 256;

  CanonicalOptions canonical() const;
  MirrorOptions mirror() const;
  ForwardOptions forward() const;
  SmoothnessOptions smoothness() const;
};

struct ToleranceInfo {
  const char* key;
  const char* description;
  double default_value;
};
// Override keys accepted under "tolerances", in documentation order.
const std::vector<ToleranceInfo>& tolerance_table();

struct SceneSpec {
  enum class Kind { none, heaviside, symmetric_pair, file } kind = Kind::none;
  Profile profile;
  double v_jump = 0.0;
  // symmetric_pair: smooth bump of the given radius centred at (u0, v0), cut by H(v - v_jump)
  double u0 = 0.0, v0 = 0.0, radius = 0.5;
  bool one_sided = true;
  std::filesystem::path file;
};

struct Grids {
  Interval u, v;
  int n_u = 0, n_v = 0;
  int n_s = 0, n_t = 0;
  int n_omega = 4097;
  double omega = 100.0;
};

struct AnalysisSpec {
  enum class Kind { simulate, mirrors, degeneracy, cancel, selftest } kind = Kind::simulate;
  std::string tag;
  // simulate
  ForwardMode mode = ForwardMode::delta_shell;
  bool check_closed_form = false;
  // mirrors
  DataCovector p;
  std::optional<Region> region;
  int grid_n = 200;
  std::optional<int> expect_isolated;
  std::optional<int> expect_families;
  // degeneracy
  double s = 0.0;
  double tau = 1.0;
  GridSpec grid;
  // cancel: "cylinder-heaviside", "flat-reflect" or "cylinder-reflect"
  std::string isometry;
  // selftest
  int samples = 16;
};

std::string to_string(AnalysisSpec::Kind kind);

struct ScenarioConfig {
  std::string source;  // file name used in messages
  std::string sha256;  // of the raw config text
  std::string tag;
  bool assert_mode = false;
  std::filesystem::path output_dir = ".";
  std::string surface_type;
  std::optional<SurfaceChart> chart;
  std::string path_type;
  std::optional<FlightPath> path;
  AcquisitionWindow window;
  SceneSpec scene;
  Grids grids;
  std::vector<AnalysisSpec> analyses;
  Tolerances tol;
};

// Throws ConfigError with "<source>:<line>: <json pointer>: <message>".
ScenarioConfig parse_config(const std::string& text, const std::string& source,
                            const std::filesystem::path& base_dir = ".");
ScenarioConfig load_config(const std::filesystem::path& file);

struct RunOptions {
  bool assert_mode = false;  // also enabled by "assert": true in the config
  bool svg = false;
  bool json = false;
  std::optional<std::filesystem::path> out_dir;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct AnalysisOutcome {
  std::string analysis;
  std::string tag;
  bool ok = true;
  std::string error;
  std::vector<CheckResult> checks;
};

struct OutputRecord {
  std::string file;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunResult {
  int exit_code = 0;
  std::filesystem::path manifest;
  std::vector<OutputRecord> outputs;
  std::vector<AnalysisOutcome> analyses;
};

SceneField build_scene(const ScenarioConfig& config);

// Runs the analyses in order. Exit code 0, or 2 when assert mode is on and a
// check or analysis failed. Throws ConfigError / IoError for exit-1 conditions.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);

// Loads, runs and maps exceptions to exit codes (1 for config and I/O errors).
int run_scenario_file(const std::filesystem::path& file, const RunOptions& options,
                      std::ostream& log, std::ostream& err);

// Built-in checks behind `sarml selftest`; returns 0 on success, 2 on failure.
int builtin_selftest(std::ostream& log);

}  // namespace sarml
