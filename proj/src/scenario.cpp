#include "sarml/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <variant>

#include "sarml/io.hpp"

namespace sarml {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------- tolerances

namespace {

struct TolField {
  const char* key;
  const char* description;
  std::variant<double Tolerances::*, int Tolerances::*> member;
};

const std::vector<TolField>& tol_fields() {
  static const std::vector<TolField> f = {
      {"range_eps", "smallest admissible |R| before the path is said to touch the surface", &Tolerances::range_eps},
      {"nadir_eps", "tangent covector norm below which a point is nadir", &Tolerances::nadir_eps},
      {"fd_step", "relative central-difference step", &Tolerances::fd_step},
      {"parallel_eps", "normalized cross product flagging Sigma_1 / Sigma_2", &Tolerances::parallel_eps},
      {"graph_fraction", "epsilon_graph as a fraction of the median smallest singular value", &Tolerances::graph_fraction},
      {"minsv_flag", "largest smallest-singular-value allowed at flagged degeneracy cells", &Tolerances::minsv_flag},
      {"tol_root", "Newton residual tolerance for mirror points", &Tolerances::tol_root},
      {"singular_condition", "Jacobian condition number above which a mirror point is singular", &Tolerances::singular_condition},
      {"seed_factor", "seed cells need min |g| within this many grid spreads", &Tolerances::seed_factor},
      {"dedupe_distance", "mirror points closer than this are merged", &Tolerances::dedupe_distance},
      {"family_min_points", "singular solutions needed before a component is traced as a family", &Tolerances::family_min_points},
      {"trace_step", "continuation predictor step length", &Tolerances::trace_step},
      {"trace_tol", "continuation corrector tolerance", &Tolerances::trace_tol},
      {"trace_max_steps", "continuation step cap per direction", &Tolerances::trace_max_steps},
      {"critical_grad_eps", "|grad T| below which a level-set segment is skipped", &Tolerances::critical_grad_eps},
      {"alpha_guard", "grazing mask half-width", &Tolerances::alpha_guard},
      {"tol_cancel_quadrature", "cancellation ratio bound for the Heaviside-product demo", &Tolerances::tol_cancel_quadrature},
      {"tol_cancel_exact", "cancellation ratio bound for exact-isometry pairs", &Tolerances::tol_cancel_exact},
      {"smooth_ratio_factor", "smooth verdict when the high-frequency ratio is within this factor of the Gaussian calibration", &Tolerances::smooth_ratio_factor},
      {"smooth_jump_factor", "significant jump when above this factor of the calibration jump", &Tolerances::smooth_jump_factor},
      {"smooth_ratio_floor", "lower bound on the calibrated ratio threshold", &Tolerances::smooth_ratio_floor},
      {"zero_floor", "data below this fraction of the reference scale count as zero", &Tolerances::zero_floor},
      {"smooth_min_samples", "contiguous unmasked samples needed per t-row", &Tolerances::smooth_min_samples},
      {"jump_match_fraction", "rows whose largest jump must sit on the predicted curve", &Tolerances::jump_match_fraction},
      {"closed_form_rel", "max relative error against the cylinder closed form", &Tolerances::closed_form_rel},
      {"selftest_tol", "analytic vs finite-difference derivative discrepancy", &Tolerances::selftest_tol},
      {"visible_samples", "s samples in the visible-set scan", &Tolerances::visible_samples},
  };
  return f;
}

}  // namespace

const std::vector<ToleranceInfo>& tolerance_table() {
  static const std::vector<ToleranceInfo> table = [] {
    std::vector<ToleranceInfo> t;
    const Tolerances d;
    for (const TolField& f : tol_fields()) {
      const double v = std::visit(
          [&](auto m) { return static_cast<double>(d.*m); }, f.member);
      t.push_back({f.key, f.description, v});
    }
    return t;
  }();
  return table;
}

CanonicalOptions Tolerances::canonical() const { return {range_eps, nadir_eps, fd_step}; }

MirrorOptions Tolerances::mirror() const {
  MirrorOptions m;
  m.tol_root = tol_root;
  m.seed_factor = seed_factor;
  m.singular_condition = singular_condition;
  m.family_min_points = family_min_points;
  m.dedupe_distance = dedupe_distance;
  m.trace.step = trace_step;
  m.trace.tol = trace_tol;
  m.trace.max_steps = trace_max_steps;
  m.trace.singular_condition = singular_condition;
  m.canon = canonical();
  return m;
}

ForwardOptions Tolerances::forward() const { return {critical_grad_eps, alpha_guard, range_eps}; }

SmoothnessOptions Tolerances::smoothness() const {
  SmoothnessOptions s;
  s.zero_floor = zero_floor;
  s.ratio_factor = smooth_ratio_factor;
  s.jump_factor = smooth_jump_factor;
  s.ratio_floor = smooth_ratio_floor;
  s.min_samples = smooth_min_samples;
  return s;
}

std::string to_string(AnalysisSpec::Kind kind) {
  switch (kind) {
    case AnalysisSpec::Kind::simulate: return "simulate";
    case AnalysisSpec::Kind::mirrors: return "mirrors";
    case AnalysisSpec::Kind::degeneracy: return "degeneracy";
    case AnalysisSpec::Kind::cancel: return "cancel";
    case AnalysisSpec::Kind::selftest: return "selftest";
  }
  return "?";
}

// ------------------------------------------------------------------ parsing

namespace {

std::string pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// Line of every member key and array element, keyed by JSON pointer. Only run
// on text that already parsed.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : text_(text) {
    if (!text_.empty()) value("");
  }

  int line(std::string ptr) const {
    while (true) {
      const auto it = lines_.find(ptr);
      if (it != lines_.end()) return it->second;
      if (ptr.empty()) return 1;
      ptr.erase(ptr.rfind('/'));
    }
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string str() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        out += text_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void value(const std::string& ptr) {
    skip();
    lines_.emplace(ptr, line_);
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      while (true) {
        skip();
        if (text_[pos_] == '}') { ++pos_; return; }
        if (text_[pos_] == ',') { ++pos_; continue; }
        const int key_line = line_;
        const std::string child = ptr + "/" + pointer_token(str());
        lines_.emplace(child, key_line);
        skip();
        ++pos_;  // ':'
        value(child);
      }
    } else if (c == '[') {
      ++pos_;
      int idx = 0;
      while (true) {
        skip();
        if (text_[pos_] == ']') { ++pos_; return; }
        if (text_[pos_] == ',') { ++pos_; continue; }
        value(ptr + "/" + std::to_string(idx++));
      }
    } else if (c == '"') {
      str();
    } else {
      while (pos_ < text_.size() && !std::strchr(",]} \t\r\n", text_[pos_])) ++pos_;
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

struct Ctx {
  std::string source;
  const LineIndex* lines;
  fs::path base;
};

[[noreturn]] void fail(const Ctx& c, const std::string& ptr, const std::string& msg) {
  throw ConfigError(c.source + ":" + std::to_string(c.lines->line(ptr)) + ": " +
                    (ptr.empty() ? std::string("/") : ptr) + ": " + msg);
}

std::string show(double x) { return format_double(x); }

class Node {
 public:
  Node(const json& j, std::string ptr, const Ctx& c) : j_(j), ptr_(std::move(ptr)), c_(c) {}

  const std::string& ptr() const { return ptr_; }
  const json& raw() const { return j_; }
  [[noreturn]] void fail(const std::string& msg) const { sarml::fail(c_, ptr_, msg); }

  void object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& [k, _] : j_.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
        std::string list;
        for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
        sarml::fail(c_, ptr_ + "/" + pointer_token(k), "unknown key '" + k + "' (allowed: " + list + ")");
      }
    }
  }
  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
  Node operator[](const char* key) const {
    if (!has(key)) fail(std::string("missing required key '") + key + "'");
    return Node(j_.at(key), ptr_ + "/" + pointer_token(key), c_);
  }
  Node at(std::size_t i) const { return Node(j_.at(i), ptr_ + "/" + std::to_string(i), c_); }
  std::size_t size() const { return j_.size(); }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double x = j_.get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }
  double positive() const {
    const double x = number();
    if (!(x > 0.0)) fail("must be positive (got " + show(x) + ")");
    return x;
  }
  int integer(int min_value) const {
    if (!j_.is_number_integer()) fail("expected an integer");
    const auto x = j_.get<long long>();
    if (x < min_value || x > 100000000) fail("must be an integer >= " + std::to_string(min_value) + " (got " + std::to_string(x) + ")");
    return static_cast<int>(x);
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  std::vector<double> numbers(std::size_t n) const {
    if (!j_.is_array() || (n > 0 && j_.size() != n))
      fail(n > 0 ? "expected an array of " + std::to_string(n) + " numbers" : "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.push_back(at(i).number());
    return out;
  }
  Interval interval() const {
    const auto x = numbers(2);
    if (!(x[1] > x[0])) fail("interval needs lo < hi (got [" + show(x[0]) + ", " + show(x[1]) + "])");
    return {x[0], x[1]};
  }
  Vec3 vec3() const {
    const auto x = numbers(3);
    return {x[0], x[1], x[2]};
  }

 private:
  const json& j_;
  std::string ptr_;
  const Ctx& c_;
};

double opt_number(const Node& n, const char* key, double def) { return n.has(key) ? n[key].number() : def; }

template <class F>
auto rethrow_at(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    n.fail(e.what());
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
}

void parse_surface(const Node& n, ScenarioConfig& cfg) {
  const std::string type = n["type"].string();
  cfg.surface_type = type;
  if (type == "flat") {
    n.object({"type", "height"});
    cfg.chart = SurfaceChart::flat_plane(opt_number(n, "height", 0.0));
  } else if (type == "cylinder") {
    n.object({"type", "radius", "axis_x", "axis_z"});
    const double r = n.has("radius") ? n["radius"].positive() : 1.0;
    cfg.chart = SurfaceChart::cylinder(r, opt_number(n, "axis_x", 0.0), opt_number(n, "axis_z", 1.0));
  } else if (type == "height_field") {
    n.object({"type", "u", "v", "n_u", "n_v", "samples"});
    const Interval u = n["u"].interval(), v = n["v"].interval();
    const int nu = n["n_u"].integer(2), nv = n["n_v"].integer(2);
    std::vector<double> samples = n["samples"].numbers(static_cast<std::size_t>(nu) * nv);
    cfg.chart = rethrow_at(n, [&] { return SurfaceChart::height_field(BicubicGrid(u, v, nu, nv, samples)); });
  } else {
    n["type"].fail("unknown surface type '" + type + "' (expected flat, cylinder or height_field)");
  }
}

void parse_path(const Node& n, ScenarioConfig& cfg) {
  const std::string type = n["type"].string();
  cfg.path_type = type;
  if (type == "straight") {
    n.object({"type", "origin", "direction", "s_range"});
    const Vec3 o = n["origin"].vec3(), d = n["direction"].vec3();
    const Interval r = n.has("s_range") ? n["s_range"].interval() : Interval{};
    cfg.path = rethrow_at(n, [&] { return FlightPath::straight_line(o, d, r); });
  } else if (type == "circle") {
    n.object({"type", "center", "radius", "s_range"});
    const Vec3 c = n["center"].vec3();
    const double r = n["radius"].positive();
    const Interval sr = n.has("s_range") ? n["s_range"].interval() : Interval{};
    cfg.path = rethrow_at(n, [&] { return FlightPath::circle(c, r, sr); });
  } else if (type == "spline") {
    n.object({"type", "s", "points"});
    std::vector<double> s = n["s"].numbers(0);
    const Node pts = n["points"];
    if (!pts.raw().is_array() || pts.size() != s.size()) pts.fail("expected one point per knot");
    std::vector<Vec3> p;
    for (std::size_t i = 0; i < pts.size(); ++i) p.push_back(pts.at(i).vec3());
    cfg.path = rethrow_at(n, [&] { return FlightPath::spline(s, p); });
  } else {
    n["type"].fail("unknown path type '" + type + "' (expected straight, circle or spline)");
  }
}

void parse_scene(const Node& n, ScenarioConfig& cfg) {
  const std::string type = n["type"].string();
  SceneSpec& sc = cfg.scene;
  if (type == "heaviside") {
    n.object({"type", "profile", "v_jump"});
    sc.kind = SceneSpec::Kind::heaviside;
    if (n.has("profile")) {
      const Node p = n["profile"];
      p.object({"name", "k"});
      sc.profile.name = p["name"].string();
      sc.profile.k = opt_number(p, "k", 1.0);
      rethrow_at(p, [&] { return sc.profile(0.0); });
    }
    sc.v_jump = opt_number(n, "v_jump", 0.0);
  } else if (type == "symmetric-pair") {
    n.object({"type", "center", "radius", "v_jump", "one_sided"});
    sc.kind = SceneSpec::Kind::symmetric_pair;
    const auto c = n["center"].numbers(2);
    sc.u0 = c[0];
    sc.v0 = c[1];
    sc.radius = n.has("radius") ? n["radius"].positive() : 0.5;
    sc.v_jump = opt_number(n, "v_jump", sc.v0);
    sc.one_sided = n.has("one_sided") ? n["one_sided"].boolean() : true;
  } else if (type == "file") {
    n.object({"type", "path"});
    sc.kind = SceneSpec::Kind::file;
    sc.file = n["path"].string();
  } else {
    n["type"].fail("unknown scene type '" + type + "' (expected heaviside, symmetric-pair or file)");
  }
}

void parse_grids(const Node& n, ScenarioConfig& cfg) {
  n.object({"u", "v", "n_u", "n_v", "n_s", "n_t", "n_omega", "omega"});
  Grids& g = cfg.grids;
  if (n.has("u")) g.u = n["u"].interval();
  else if (cfg.chart && cfg.chart->kind() == SurfaceChart::Kind::cylinder) g.u = {0.0, M_PI};
  if (n.has("v")) g.v = n["v"].interval();
  if (n.has("n_u")) g.n_u = n["n_u"].integer(1);
  if (n.has("n_v")) g.n_v = n["n_v"].integer(1);
  if (n.has("n_s")) g.n_s = n["n_s"].integer(1);
  if (n.has("n_t")) g.n_t = n["n_t"].integer(1);
  if (n.has("n_omega")) g.n_omega = n["n_omega"].integer(16);
  if (n.has("omega")) g.omega = n["omega"].positive();
}

bool finite_interval(Interval r) { return std::isfinite(r.lo) && std::isfinite(r.hi) && r.hi > r.lo; }

Region parse_region(const Node& n) {
  n.object({"u", "v"});
  return {n["u"].interval(), n["v"].interval()};
}

AnalysisSpec parse_analysis(const Node& n, const ScenarioConfig& cfg) {
  AnalysisSpec a;
  const std::string type = n["type"].string();
  if (type == "simulate") {
    n.object({"type", "tag", "mode", "check_closed_form"});
    a.kind = AnalysisSpec::Kind::simulate;
    if (n.has("mode")) {
      const std::string m = n["mode"].string();
      if (m == "delta_shell") a.mode = ForwardMode::delta_shell;
      else if (m == "band_limited") a.mode = ForwardMode::band_limited;
      else n["mode"].fail("unknown mode '" + m + "' (expected delta_shell or band_limited)");
    }
    if (n.has("check_closed_form")) a.check_closed_form = n["check_closed_form"].boolean();
  } else if (type == "mirrors") {
    n.object({"type", "tag", "p", "region", "grid_n", "expect_isolated", "expect_families"});
    a.kind = AnalysisSpec::Kind::mirrors;
    const auto p = n["p"].numbers(4);
    a.p = {p[0], p[1], p[2], p[3]};
    if (!(a.p.t > 0.0)) n["p"].fail("travel time p[1] must be positive (got " + show(a.p.t) + ")");
    if (a.p.tau == 0.0) n["p"].fail("tau p[3] must be nonzero");
    if (n.has("region")) a.region = parse_region(n["region"]);
    if (n.has("grid_n")) a.grid_n = n["grid_n"].integer(4);
    if (n.has("expect_isolated")) a.expect_isolated = n["expect_isolated"].integer(0);
    if (n.has("expect_families")) a.expect_families = n["expect_families"].integer(0);
  } else if (type == "degeneracy") {
    n.object({"type", "tag", "s", "tau", "grid"});
    a.kind = AnalysisSpec::Kind::degeneracy;
    a.s = opt_number(n, "s", 0.0);
    a.tau = opt_number(n, "tau", 1.0);
    if (a.tau == 0.0) n["tau"].fail("must be nonzero");
    a.grid = {cfg.grids.u, cfg.grids.v, 101, 101};
    if (n.has("grid")) {
      const Node g = n["grid"];
      g.object({"u", "v", "n_u", "n_v"});
      if (g.has("u")) a.grid.u = g["u"].interval();
      if (g.has("v")) a.grid.v = g["v"].interval();
      if (g.has("n_u")) a.grid.n_u = g["n_u"].integer(1);
      if (g.has("n_v")) a.grid.n_v = g["n_v"].integer(1);
    }
    if (!finite_interval(a.grid.u) || !finite_interval(a.grid.v))
      n.fail("degeneracy grid needs u and v ranges (in grid or in grids)");
  } else if (type == "cancel") {
    n.object({"type", "tag", "isometry"});
    a.kind = AnalysisSpec::Kind::cancel;
    if (n.has("isometry")) a.isometry = n["isometry"].string();
    else if (cfg.scene.kind == SceneSpec::Kind::heaviside) a.isometry = "cylinder-heaviside";
    else n.fail("missing required key 'isometry'");
    if (a.isometry != "cylinder-heaviside" && a.isometry != "flat-reflect" && a.isometry != "cylinder-reflect")
      n["isometry"].fail("unknown isometry '" + a.isometry +
                         "' (expected cylinder-heaviside, flat-reflect or cylinder-reflect)");
  } else if (type == "selftest") {
    n.object({"type", "tag", "samples"});
    a.kind = AnalysisSpec::Kind::selftest;
    if (n.has("samples")) a.samples = n["samples"].integer(2);
  } else {
    n["type"].fail("unknown analysis '" + type + "' (expected simulate, mirrors, degeneracy, cancel or selftest)");
  }
  a.tag = n.has("tag") ? n["tag"].string() : cfg.tag;
  return a;
}

bool valid_tag(const std::string& t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

// The Heaviside demo and the closed form assume the unit cylinder with the path on its axis.
std::string cylinder_demo_mismatch(const ScenarioConfig& cfg) {
  const double e = 1e-12;
  if (!cfg.chart || cfg.chart->kind() != SurfaceChart::Kind::cylinder || std::abs(cfg.chart->radius() - 1.0) > e ||
      std::abs(cfg.chart->axis_x()) > e || std::abs(cfg.chart->axis_z() - 1.0) > e)
    return "needs the unit cylinder with axis (0, 1)";
  if (!cfg.path || cfg.path->kind() != FlightPath::Kind::straight_line ||
      (cfg.path->origin() - Vec3(0, 0, 1)).norm() > e || (cfg.path->direction() - Vec3::UnitY()).norm() > e)
    return "needs the straight path origin [0,0,1], direction [0,1,0]";
  if (cfg.scene.kind != SceneSpec::Kind::heaviside || cfg.scene.v_jump != 0.0)
    return "needs a heaviside scene with v_jump = 0";
  if (std::abs(cfg.grids.u.lo) > e || std::abs(cfg.grids.u.hi - M_PI) > e) return "needs grids.u = [0, pi]";
  return {};
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte > 0 ? byte - 1 : 0), '\n'));
    throw ConfigError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
  const LineIndex lines(text);
  const Ctx ctx{source, &lines, base_dir};
  const Node top(root, "", ctx);
  top.object({"version", "tag", "assert", "output_dir", "surface", "path", "window", "scene", "grids",
              "analyses", "tolerances"});

  ScenarioConfig cfg;
  cfg.source = source;
  cfg.sha256 = sha256_hex(text);
  const int version = top["version"].integer(0);
  if (version != kConfigVersion)
    top["version"].fail("unsupported config version " + std::to_string(version) + " (expected " +
                        std::to_string(kConfigVersion) + ")");
  cfg.tag = top["tag"].string();
  if (!valid_tag(cfg.tag)) top["tag"].fail("tag must be non-empty and use only letters, digits, '_', '-', '.'");
  if (top.has("assert")) cfg.assert_mode = top["assert"].boolean();
  if (top.has("output_dir")) cfg.output_dir = top["output_dir"].string();

  parse_surface(top["surface"], cfg);
  parse_path(top["path"], cfg);

  const Node w = top["window"];
  w.object({"s", "t", "c0"});
  cfg.window.c0 = w["c0"].positive();
  cfg.window.s = w["s"].interval();
  cfg.window.t = w["t"].interval();
  if (!(cfg.window.t.lo > 0.0)) w["t"].fail("travel times must be positive (got t1 = " + show(cfg.window.t.lo) + ")");

  if (top.has("scene")) parse_scene(top["scene"], cfg);
  if (cfg.scene.kind == SceneSpec::Kind::file) cfg.scene.file = base_dir / cfg.scene.file;
  if (top.has("grids")) parse_grids(top["grids"], cfg);
  else if (cfg.chart->kind() == SurfaceChart::Kind::cylinder) cfg.grids.u = {0.0, M_PI};

  if (top.has("tolerances")) {
    const Node t = top["tolerances"];
    if (!t.raw().is_object()) t.fail("expected an object");
    for (const auto& [k, _] : t.raw().items()) {
      const auto it = std::find_if(tol_fields().begin(), tol_fields().end(),
                                   [&](const TolField& f) { return k == f.key; });
      if (it == tol_fields().end()) {
        std::string list;
        for (const TolField& f : tol_fields()) list += std::string(list.empty() ? "" : ", ") + f.key;
        fail(ctx, t.ptr() + "/" + pointer_token(k), "unknown tolerance '" + k + "' (allowed: " + list + ")");
      }
      const Node v = t[it->key];
      std::visit(
          [&](auto m) {
            if constexpr (std::is_same_v<decltype(m), int Tolerances::*>)
              cfg.tol.*m = v.integer(1);
            else
              cfg.tol.*m = v.positive();
          },
          it->member);
    }
  }

  const Node an = top["analyses"];
  if (!an.raw().is_array() || an.size() == 0) an.fail("expected a non-empty array of analyses");
  std::set<std::pair<int, std::string>> seen;
  for (std::size_t i = 0; i < an.size(); ++i) {
    const Node n = an.at(i);
    if (!n.raw().is_object()) n.fail("expected an object");
    AnalysisSpec a = parse_analysis(n, cfg);
    if (!valid_tag(a.tag)) n["tag"].fail("tag must be non-empty and use only letters, digits, '_', '-', '.'");
    if (!seen.insert({static_cast<int>(a.kind), a.tag}).second)
      n.fail("duplicate " + to_string(a.kind) + " analysis with tag '" + a.tag + "'");

    const bool needs_scene = a.kind == AnalysisSpec::Kind::simulate || a.kind == AnalysisSpec::Kind::cancel;
    if (needs_scene) {
      if (cfg.scene.kind == SceneSpec::Kind::none) n.fail(to_string(a.kind) + " needs a scene");
      if (cfg.grids.n_s < 1 || cfg.grids.n_t < 1) n.fail(to_string(a.kind) + " needs grids.n_s and grids.n_t");
      if (cfg.scene.kind != SceneSpec::Kind::file &&
          (cfg.grids.n_u < 1 || cfg.grids.n_v < 1 || !finite_interval(cfg.grids.u) || !finite_interval(cfg.grids.v)))
        n.fail(to_string(a.kind) + " needs grids.u, grids.v, grids.n_u and grids.n_v");
    }
    if ((a.kind == AnalysisSpec::Kind::simulate && a.check_closed_form) ||
        (a.kind == AnalysisSpec::Kind::cancel && a.isometry == "cylinder-heaviside")) {
      const std::string why = cylinder_demo_mismatch(cfg);
      if (!why.empty()) n.fail((a.kind == AnalysisSpec::Kind::cancel ? "cylinder-heaviside " : "check_closed_form ") + why);
      if (a.kind == AnalysisSpec::Kind::simulate && cfg.scene.profile.integral_0_pi() == 0.0)
        n.fail("check_closed_form needs a profile with nonzero integral over (0, pi)");
      if (a.kind == AnalysisSpec::Kind::simulate && a.mode != ForwardMode::delta_shell)
        n.fail("check_closed_form applies to delta_shell mode");
    }
    cfg.analyses.push_back(a);
  }
  return cfg;
}

ScenarioConfig load_config(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError(file.string() + ": cannot read config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.string(), file.parent_path());
}

// ------------------------------------------------------------------ running

SceneField build_scene(const ScenarioConfig& cfg) {
  const SceneSpec& sc = cfg.scene;
  const Grids& g = cfg.grids;
  switch (sc.kind) {
    case SceneSpec::Kind::heaviside:
      return heaviside_scene(*cfg.chart, g.u, g.n_u, g.v, g.n_v, sc.profile, sc.v_jump);
    case SceneSpec::Kind::symmetric_pair:
      return SceneField::sample(*cfg.chart, g.u, g.v, g.n_u, g.n_v, [&](double u, double v) {
        const double r = std::hypot(u - sc.u0, v - sc.v0) / sc.radius;
        const double bump = r < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
        if (!sc.one_sided) return bump;
        return bump * (v > sc.v_jump ? 1.0 : v < sc.v_jump ? 0.0 : 0.5);
      });
    case SceneSpec::Kind::file:
      return read_scene_csv(sc.file, *cfg.chart, g.u, g.v);
    case SceneSpec::Kind::none:
      break;
  }
  throw ConfigError("no scene configured");
}

namespace {

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError(dir_.string() + ": cannot create output directory");
  }

  void write(const std::string& name, const std::string& content, bool record = true) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw IoError(p.string() + ": cannot write output");
    if (record) records.push_back({name, sha256_hex(content), content.size()});
  }

  const fs::path& dir() const { return dir_; }
  std::vector<OutputRecord> records;

 private:
  fs::path dir_;
};

void check(AnalysisOutcome& o, const std::string& name, double value, double tol, bool pass) {
  o.checks.push_back({name, value, tol, pass});
}

std::string report_text(const CancellationReport& r) {
  std::ostringstream os;
  os << "scenario = " << r.scenario << "\n"
     << "reference_norm = " << format_double(r.reference_norm) << "\n"
     << "residual_norm = " << format_double(r.residual_norm) << "\n"
     << "ratio = " << format_double(r.ratio) << "\n"
     << "tol_cancel = " << format_double(r.tolerance) << "\n"
     << "reference_verdict = " << (r.reference_smoothness.verdict == Verdict::smooth ? "smooth" : "singular") << "\n"
     << "reference_highfreq_ratio = " << format_double(r.reference_smoothness.highfreq_ratio) << "\n"
     << "residual_verdict = " << (r.residual_smoothness.verdict == Verdict::smooth ? "smooth" : "singular") << "\n"
     << "residual_highfreq_ratio = " << format_double(r.residual_smoothness.highfreq_ratio) << "\n"
     << "residual_below_zero_floor = " << (r.residual_smoothness.below_floor ? "true" : "false") << "\n"
     << "scene_jump = " << format_double(r.scene_jump.jump) << "\n"
     << "scene_jump_baseline = " << format_double(r.scene_jump.baseline) << "\n"
     << "degenerate_reference = " << (r.degenerate_reference ? "true" : "false") << "\n"
     << "pass = " << (r.pass ? "true" : "false") << "\n";
  if (!r.note.empty()) os << "note = " << r.note << "\n";
  return os.str();
}

void run_simulate(const ScenarioConfig& cfg, const AnalysisSpec& a, const RunOptions& opt, Outputs& out,
                  AnalysisOutcome& o) {
  const SceneField scene = build_scene(cfg);
  const Grids& g = cfg.grids;
  Sinogram sg = a.mode == ForwardMode::delta_shell
                    ? forward_sinogram(scene, {}, *cfg.path, cfg.window, g.n_s, g.n_t, cfg.tol.forward())
                    : bandlimited_sinogram(scene, {}, *cfg.path, cfg.window, g.n_s, g.n_t, g.omega, g.n_omega,
                                           cfg.tol.forward());
  const std::string base = "simulate_" + a.tag;
  out.write(base + ".csv", sinogram_csv(sg));
  if (opt.svg) out.write(base + ".svg", heatmap_svg(sinogram_heatmap(sg, base)));

  ojson rep;
  rep["mode"] = a.mode == ForwardMode::delta_shell ? "delta_shell" : "band_limited";
  rep["amplitude"] = sg.amplitude_tag;
  rep["max_abs"] = sg.max_abs();
  rep["unmasked"] = sg.unmasked_count();
  rep["masked"] = static_cast<int>(sg.values.size()) - sg.unmasked_count();
  rep["near_critical_segments"] = sg.near_critical_segments;
  if (a.mode == ForwardMode::band_limited) {
    rep["omega"] = g.omega;
    rep["n_omega"] = g.n_omega;
  }
  if (a.check_closed_form) {
    const double integral = cfg.scene.profile.integral_0_pi();
    double err = 0.0;
    for (int it = 0; it < sg.n_t; ++it)
      for (int is = 0; is < sg.n_s; ++is) {
        if (sg.masked(is, it)) continue;
        const double c = cylinder_closed_form(sg.s_at(is), sg.t_at(it), integral, cfg.window.c0);
        const double f = sg.at(is, it);
        err = std::max(err, c != 0.0 ? std::abs(f - c) / std::abs(c) : std::abs(f));
      }
    rep["closed_form_max_rel_error"] = err;
    check(o, "closed_form_max_rel_error", err, cfg.tol.closed_form_rel, err <= cfg.tol.closed_form_rel);
  }
  if (opt.json) out.write(base + ".json", rep.dump(2) + "\n");
}

void run_mirrors(const ScenarioConfig& cfg, const AnalysisSpec& a, const RunOptions& opt, Outputs& out,
                 AnalysisOutcome& o) {
  const Region region = a.region ? *a.region : visible_bounding_box(*cfg.chart, *cfg.path, cfg.window);
  const MirrorSet set = find_mirror_set(*cfg.chart, *cfg.path, a.p, region, a.grid_n, cfg.window.c0, cfg.tol.mirror());
  const std::string base = "mirrors_" + a.tag;
  out.write(base + ".csv", mirrors_csv(set));
  out.write(base + ".txt", mirrors_summary(set));

  double max_res = 0.0;
  for (const MirrorPoint& m : set.isolated) max_res = std::max(max_res, m.residual);
  check(o, "isolated_max_residual", max_res, cfg.tol.tol_root, max_res <= cfg.tol.tol_root);
  int bad = 0;
  for (const FamilyCurve& f : set.families) bad += f.status != TraceStatus::ok;
  check(o, "families_not_traced", bad, 0, bad == 0);
  if (a.expect_isolated)
    check(o, "isolated_count", static_cast<double>(set.isolated.size()), *a.expect_isolated,
          static_cast<int>(set.isolated.size()) == *a.expect_isolated);
  if (a.expect_families)
    check(o, "family_count", static_cast<double>(set.families.size()), *a.expect_families,
          static_cast<int>(set.families.size()) == *a.expect_families);

  if (opt.json) {
    ojson rep;
    rep["p"] = {a.p.s, a.p.t, a.p.sigma, a.p.tau};
    rep["region"] = {{"u", {region.u.lo, region.u.hi}}, {"v", {region.v.lo, region.v.hi}}};
    rep["isolated"] = set.isolated.size();
    rep["families"] = set.families.size();
    rep["seeds"] = set.seeds;
    rep["discarded_seeds"] = set.discarded_seeds;
    out.write(base + ".json", rep.dump(2) + "\n");
  }
}

void run_degeneracy(const ScenarioConfig& cfg, const AnalysisSpec& a, const RunOptions& opt, Outputs& out,
                    AnalysisOutcome& o) {
  const DegeneracyMap map = degeneracy_map(*cfg.chart, *cfg.path, a.grid, a.s, a.tau, cfg.window.c0,
                                           cfg.tol.parallel_eps, cfg.tol.canonical());
  const std::string base = "degeneracy_" + a.tag;
  out.write(base + ".csv", degeneracy_csv(map));
  if (opt.svg) {
    for (int k = 0; k < 2; ++k) {
      HeatMap h;
      h.n_x = map.grid.n_u;
      h.n_y = map.grid.n_v;
      for (const DegeneracyReport& c : map.cells) h.values.push_back(k == 0 ? c.sigma1_residual : c.sigma2_residual);
      h.title = base + (k == 0 ? " sigma1_residual" : " sigma2_residual");
      h.x_label = "u";
      h.y_label = "v";
      out.write(base + (k == 0 ? "_sigma1.svg" : "_sigma2.svg"), heatmap_svg(h));
    }
  }
  double worst = 0.0;
  for (int idx : map.flagged) {
    const DegeneracyReport& c = map.cells[idx];
    if (c.sigma1_residual <= map.parallel_eps) worst = std::max(worst, c.minsv_piL);
    if (c.sigma2_residual <= map.parallel_eps) worst = std::max(worst, c.minsv_piR);
  }
  check(o, "flagged_max_minsv", worst, cfg.tol.minsv_flag, worst <= cfg.tol.minsv_flag);

  if (opt.json) {
    const GraphThresholds th = calibrate_graph_threshold(map, cfg.tol.graph_fraction);
    int nadir = 0;
    for (const DegeneracyReport& c : map.cells) nadir += c.nadir_flag;
    ojson rep;
    rep["s"] = a.s;
    rep["tau"] = a.tau;
    rep["cells"] = map.cells.size();
    rep["flagged"] = map.flagged.size();
    rep["failed"] = map.failed.size();
    rep["nadir"] = nadir;
    rep["epsilon_graph_piL"] = th.piL;
    rep["epsilon_graph_piR"] = th.piR;
    out.write(base + ".json", rep.dump(2) + "\n");
  }
}

void run_cancel(const ScenarioConfig& cfg, const AnalysisSpec& a, const RunOptions& opt, Outputs& out,
                AnalysisOutcome& o) {
  const std::string base = "cancel_" + a.tag;
  const Grids& g = cfg.grids;
  CancellationReport rep;
  Sinogram ref, res;
  std::optional<JumpReport> ref_jumps, res_jumps;
  if (a.isometry == "cylinder-heaviside") {
    const CylinderDemoGrids grids{g.n_u, g.n_v, g.v, g.n_s, g.n_t};
    CylinderDemoResult r = cylinder_cancellation_demo(cfg.scene.profile, cfg.window, grids,
                                                      cfg.tol.tol_cancel_quadrature, cfg.tol.forward(),
                                                      cfg.tol.smoothness());
    rep = r.report;
    ref = std::move(r.reference);
    res = std::move(r.residual);
    ref_jumps = std::move(r.reference_jumps);
    res_jumps = std::move(r.residual_jumps);
  } else {
    const SceneField v1 = build_scene(cfg);
    SymmetricResult r = symmetric_cancellation(*cfg.chart, *cfg.path, v1, parse_isometry(a.isometry), cfg.window,
                                               g.n_s, g.n_t, {}, cfg.tol.tol_cancel_exact, cfg.tol.forward(),
                                               cfg.tol.smoothness());
    rep = r.report;
    ref = std::move(r.reference);
    res = std::move(r.residual);
  }
  out.write(base + "_reference.csv", sinogram_csv(ref));
  out.write(base + "_residual.csv", sinogram_csv(res));
  if (ref_jumps) out.write(base + "_jumps.csv", jumps_csv(*ref_jumps));
  out.write(base + ".txt", report_text(rep));
  if (opt.svg) {
    out.write(base + "_reference.svg", heatmap_svg(sinogram_heatmap(ref, base + " reference")));
    out.write(base + "_residual.svg", heatmap_svg(sinogram_heatmap(res, base + " residual")));
  }
  if (opt.json) {
    ojson j = to_json(rep);
    if (ref_jumps) {
      j["reference_jumps"] = to_json(*ref_jumps);
      j["residual_jumps"] = to_json(*res_jumps);
    }
    out.write(base + ".json", j.dump(2) + "\n");
  }

  check(o, "cancellation_ratio", rep.ratio, rep.tolerance, rep.pass);
  check(o, "reference_nondegenerate", rep.degenerate_reference ? 0.0 : 1.0, 1.0, !rep.degenerate_reference);
  // V1 + V2 must still jump: well above its smooth variation and not roundoff.
  const double jump_bar = std::max(10.0 * rep.scene_jump.baseline, cfg.tol.zero_floor * rep.scene_jump.scale);
  check(o, "scene_jump_retained", rep.scene_jump.jump, jump_bar, rep.scene_jump.jump > jump_bar);
  if (ref_jumps) {
    check(o, "reference_singular", rep.reference_smoothness.verdict == Verdict::singular, 1.0,
          rep.reference_smoothness.verdict == Verdict::singular);
    check(o, "residual_smooth", rep.residual_smoothness.verdict == Verdict::smooth, 1.0,
          rep.residual_smoothness.verdict == Verdict::smooth);
    check(o, "reference_jump_match_fraction", ref_jumps->match_fraction, cfg.tol.jump_match_fraction,
          ref_jumps->match_fraction >= cfg.tol.jump_match_fraction);
    check(o, "residual_no_significant_jump", res_jumps->significant ? 1.0 : 0.0, 0.0, !res_jumps->significant);
  }
}

void run_selftest(const ScenarioConfig& cfg, const AnalysisSpec& a, Outputs& out, AnalysisOutcome& o) {
  Interval u = cfg.grids.u, v = cfg.grids.v;
  if (!finite_interval(u)) u = cfg.chart->kind() == SurfaceChart::Kind::cylinder ? Interval{0.0, M_PI} : Interval{-1.0, 1.0};
  if (!finite_interval(v)) v = {-1.0, 1.0};
  if (cfg.chart->grid()) {
    u = cfg.chart->grid()->u_range();
    v = cfg.chart->grid()->v_range();
  }
  // Interior samples keep the difference stencil inside the chart.
  std::vector<std::array<double, 2>> surf;
  const int n = a.samples;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      surf.push_back({u.lo + u.width() * (i + 0.5) / n, v.lo + v.width() * (j + 0.5) / n});
  std::vector<double> ps;
  Interval s = cfg.window.s;
  const Interval pr = cfg.path->s_range();
  s.lo = std::max(s.lo, pr.lo);
  s.hi = std::min(s.hi, pr.hi);
  for (int k = 0; k < n; ++k) ps.push_back(s.lo + s.width() * (k + 0.5) / n);
  const SelfTestReport r = derivative_selftest(*cfg.chart, *cfg.path, surf, ps, cfg.tol.fd_step, cfg.tol.selftest_tol);
  std::ostringstream os;
  os << "surface_samples = " << surf.size() << "\npath_samples = " << ps.size()
     << "\nmax_surface_discrepancy = " << format_double(r.max_surface_discrepancy)
     << "\nmax_path_discrepancy = " << format_double(r.max_path_discrepancy)
     << "\ntolerance = " << format_double(cfg.tol.selftest_tol) << "\npass = " << (r.pass ? "true" : "false") << "\n";
  out.write("selftest_" + a.tag + ".txt", os.str());
  check(o, "derivative_max_discrepancy", r.max_discrepancy(), cfg.tol.selftest_tol, r.pass);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt, std::ostream& log) {
  const bool assert_mode = opt.assert_mode || cfg.assert_mode;
  Outputs out(opt.out_dir ? *opt.out_dir : cfg.output_dir);
  RunResult result;
  bool any_failure = false;

  for (const AnalysisSpec& a : cfg.analyses) {
    AnalysisOutcome o;
    o.analysis = to_string(a.kind);
    o.tag = a.tag;
    try {
      switch (a.kind) {
        case AnalysisSpec::Kind::simulate: run_simulate(cfg, a, opt, out, o); break;
        case AnalysisSpec::Kind::mirrors: run_mirrors(cfg, a, opt, out, o); break;
        case AnalysisSpec::Kind::degeneracy: run_degeneracy(cfg, a, opt, out, o); break;
        case AnalysisSpec::Kind::cancel: run_cancel(cfg, a, opt, out, o); break;
        case AnalysisSpec::Kind::selftest: run_selftest(cfg, a, out, o); break;
      }
    } catch (const DomainError& e) {
      o.ok = false;
      o.error = std::string("domain error: ") + e.what();
    } catch (const GeometryError& e) {
      o.ok = false;
      o.error = std::string("geometry error: ") + e.what();
    }
    log << o.analysis << "[" << o.tag << "]: " << (o.ok ? "ok" : "FAILED: " + o.error) << "\n";
    for (const CheckResult& c : o.checks) {
      log << "  " << (c.pass ? "pass" : "FAIL") << " " << c.name << " = " << format_double(c.value)
          << " (bound " << format_double(c.tolerance) << ")\n";
      any_failure |= !c.pass;
    }
    any_failure |= !o.ok;
    result.analyses.push_back(std::move(o));
  }
  result.exit_code = assert_mode && any_failure ? 2 : 0;

  ojson m;
  m["version"] = kConfigVersion;
  m["tag"] = cfg.tag;
  m["config_sha256"] = cfg.sha256;
  m["assert"] = assert_mode;
  m["outputs"] = ojson::array();
  for (const OutputRecord& r : out.records)
    m["outputs"].push_back({{"file", r.file}, {"sha256", r.sha256}, {"bytes", r.bytes}});
  m["analyses"] = ojson::array();
  for (const AnalysisOutcome& o : result.analyses) {
    ojson a;
    a["analysis"] = o.analysis;
    a["tag"] = o.tag;
    a["status"] = o.ok ? "ok" : "failed";
    if (!o.ok) a["error"] = o.error;
    a["checks"] = ojson::array();
    for (const CheckResult& c : o.checks)
      a["checks"].push_back({{"name", c.name}, {"value", c.value}, {"bound", c.tolerance}, {"pass", c.pass}});
    m["analyses"].push_back(a);
  }
  m["exit_code"] = result.exit_code;
  const std::string name = "manifest_" + cfg.tag + ".json";
  out.write(name, m.dump(2) + "\n", false);
  result.manifest = out.dir() / name;
  result.outputs = out.records;
  return result;
}

int run_scenario_file(const fs::path& file, const RunOptions& options, std::ostream& log, std::ostream& err) {
  try {
    const ScenarioConfig cfg = load_config(file);
    return run_scenario(cfg, options, log).exit_code;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
  } catch (const IoError& e) {
    err << "output error: " << e.what() << "\n";
  }
  return 1;
}

int builtin_selftest(std::ostream& log) {
  bool ok = true;
  auto line = [&](const std::string& name, double value, double bound, bool pass) {
    log << (pass ? "PASS " : "FAIL ") << name << " value=" << format_double(value)
        << " bound=" << format_double(bound) << "\n";
    ok &= pass;
  };

  std::vector<double> hf(8 * 8);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) hf[j * 8 + i] = 0.2 * std::sin(0.7 * i) * std::cos(0.4 * j);
  const std::vector<std::pair<std::string, SurfaceChart>> charts = {
      {"flat", SurfaceChart::flat_plane(0.3)},
      {"cylinder", SurfaceChart::cylinder(1.5, 0.2, 2.0)},
      {"height_field", SurfaceChart::height_field(BicubicGrid({-2, 2}, {-2, 2}, 8, 8, hf))}};
  const std::vector<std::pair<std::string, FlightPath>> paths = {
      {"straight", FlightPath::straight_line(Vec3(0.5, 0, 3), Vec3(0.2, 1, 0.1))},
      {"circle", FlightPath::circle(Vec3(0, 0, 4), 3.0)},
      {"spline", FlightPath::spline({0, 1, 2, 3, 4}, {Vec3(0, 0, 3), Vec3(0.3, 1, 3.1), Vec3(0.5, 2, 3),
                                                        Vec3(0.4, 3, 2.9), Vec3(0, 4, 3)})}};
  for (const auto& [cn, chart] : charts) {
    const Interval u = chart.kind() == SurfaceChart::Kind::cylinder ? Interval{0.2, 2.9} : Interval{-1.5, 1.5};
    std::vector<std::array<double, 2>> surf;
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 5; ++i) surf.push_back({u.lo + u.width() * i / 4.0, -1.5 + 0.75 * j});
    for (const auto& [pn, path] : paths) {
      const std::vector<double> ps = {0.5, 1.2, 2.0, 2.7, 3.5};
      const SelfTestReport r = derivative_selftest(chart, path, surf, ps);
      line("derivatives " + cn + "/" + pn, r.max_discrepancy(), 1e-6, r.pass);
    }
  }

  // Flat plane, path overhead at height 1: p = (0, sqrt 2, 0, 1) has mirror points u = +-1, v = 0.
  const SurfaceChart flat = SurfaceChart::flat_plane();
  const FlightPath line_path = FlightPath::straight_line(Vec3(0, 0, 1), Vec3::UnitY());
  const MirrorSet ms = find_mirror_set(flat, line_path, {0.0, std::sqrt(2.0), 0.0, 1.0}, {{-3, 3}, {-3, 3}}, 120, 2.0);
  double err = ms.isolated.size() == 2 ? 0.0 : INFINITY;
  if (ms.isolated.size() == 2)
    for (int k = 0; k < 2; ++k)
      err = std::max(err, std::hypot(ms.isolated[k].q.u - (k == 0 ? -1.0 : 1.0), ms.isolated[k].q.v));
  line("flat mirror pair", err, 1e-8, err <= 1e-8);

  // Cylinder closed form at (s, t) = (0, 2) with integral 2.
  const SceneField sc = heaviside_scene(SurfaceChart::cylinder(), {0, M_PI}, 100, {-3, 3}, 100,
                                        [](double u) { return std::sin(u); });
  const double f = delta_shell_forward(sc, {}, line_path, 0.0, 2.0, 2.0).value;
  const double c = cylinder_closed_form(0.0, 2.0, 2.0, 2.0);
  line("cylinder closed form (0, 2)", std::abs(f - c) / c, 1e-2, std::abs(f - c) <= 1e-2 * c);
  return ok ? 0 : 2;
}

}  // namespace sarml
