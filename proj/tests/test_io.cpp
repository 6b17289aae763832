#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sarml/io.hpp"

using namespace sarml;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

fs::path tmp_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::path(SARML_TEST_TMP) / "io";
  fs::create_directories(dir);
  std::ofstream(dir / name, std::ios::binary) << content;
  return dir / name;
}

}  // namespace

TEST_CASE("format_double round-trips with 17 significant digits") {
  for (double x : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, -1e-300, 2.2250738585072014e-308}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("sinogram CSV layout") {
  Sinogram sg(AcquisitionWindow{{-1, 1}, {1, 2}, 2.0}, 3, 2);
  sg.at(0, 0) = 1.5;
  sg.at(1, 0) = -2.0;
  sg.at(2, 0) = 0.25;
  sg.at(0, 1) = NAN;
  sg.mask[3] = 1;
  sg.at(1, 1) = 3.0;
  sg.at(2, 1) = 4.0;
  const auto l = lines(sinogram_csv(sg));
  REQUIRE(l.size() == 3);
  CHECK(l[0] == "t\\s,-1,0,1");
  CHECK(l[1] == "1,1.5,-2,0.25");
  CHECK(l[2] == "2,nan,3,4");
}

TEST_CASE("degeneracy and mirror CSVs have the documented columns") {
  const FlightPath line = FlightPath::straight_line(Vec3(0, 0, 1), Vec3::UnitY());
  const DegeneracyMap m = degeneracy_map(SurfaceChart::flat_plane(), line, {{-1, 1}, {-1, 1}, 3, 3}, 0.0, 1.0, 2.0);
  const auto d = lines(degeneracy_csv(m));
  CHECK(d[0] == "u,v,sigma1_residual,sigma2_residual,minsv_piL,minsv_piR,nadir_flag");
  CHECK(d.size() == 10);

  const MirrorSet ms = find_mirror_set(SurfaceChart::flat_plane(), line, {0.0, std::sqrt(2.0), 0.0, 1.0},
                                       {{-3, 3}, {-3, 3}}, 60, 2.0);
  const auto r = lines(mirrors_csv(ms));
  CHECK(r[0] == "u,v,xi,eta,sigma1_residual,sigma2_residual,family_id");
  REQUIRE(r.size() == 3);
  CHECK(std::stod(r[1].substr(0, r[1].find(','))) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r[1].substr(r[1].rfind(',') + 1) == "-1");
  CHECK(mirrors_summary(ms).find("isolated") != std::string::npos);
}

TEST_CASE("heat map SVG") {
  HeatMap h;
  h.n_x = 2;
  h.n_y = 2;
  h.values = {0.0, 1.0, NAN, 0.5};
  h.title = "demo <map>";
  const std::string svg = heatmap_svg(h);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(svg.find("min") != std::string::npos);
  CHECK(svg.find("max") != std::string::npos);
  CHECK(svg.find("demo &lt;map&gt;") != std::string::npos);
  // Three painted cells; the NaN cell is left blank.
  std::size_t rects = 0;
  for (std::size_t p = svg.find("<rect"); p != std::string::npos; p = svg.find("<rect", p + 1)) ++rects;
  CHECK(rects == 3 + 1);  // plus the frame
}

TEST_CASE("scene CSV import") {
  const fs::path ok = tmp_file("ok.csv", "# header comment\n1,2,3\n\n4,5,6\n");
  const SceneField s = read_scene_csv(ok, SurfaceChart::flat_plane(), {0, 3}, {0, 2});
  CHECK(s.n_u() == 3);
  CHECK(s.n_v() == 2);
  CHECK(s.value(0, 0) == 1.0);
  CHECK(s.value(2, 1) == 6.0);

  const fs::path ragged = tmp_file("ragged.csv", "1,2,3\n# c\n4,5\n");
  try {
    read_scene_csv(ragged, SurfaceChart::flat_plane(), {0, 3}, {0, 2});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("ragged.csv:3") != std::string::npos);
  }
  const fs::path junk = tmp_file("junk.csv", "1,x,3\n");
  try {
    read_scene_csv(junk, SurfaceChart::flat_plane(), {0, 3}, {0, 1});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("junk.csv:1") != std::string::npos);
  }
  CHECK_THROWS_AS(read_scene_csv(tmp_file("nan.csv", "1,nan\n"), SurfaceChart::flat_plane(), {0, 1}, {0, 1}), ConfigError);
}

TEST_CASE("SHA-256 test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("CancellationReport JSON carries every field") {
  CancellationReport r;
  r.scenario = "flat-reflect";
  r.reference_norm = 2.0;
  r.residual_norm = 1e-17;
  r.ratio = 5e-18;
  r.tolerance = 1e-9;
  r.pass = true;
  const auto j = to_json(r);
  for (const char* k : {"scenario", "reference_norm", "residual_norm", "ratio", "tol_cancel", "reference_smoothness",
                        "residual_smoothness", "scene_jump", "degenerate_reference", "pass"})
    CHECK(j.contains(k));
  CHECK(j["reference_smoothness"].contains("verdict"));
}
