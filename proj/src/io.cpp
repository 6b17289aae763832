#include "sarml/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace sarml {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string sinogram_csv(const Sinogram& sg) {
  std::string out = "t\\s";
  for (int is = 0; is < sg.n_s; ++is) out += "," + format_double(sg.s_at(is));
  out += '\n';
  for (int it = 0; it < sg.n_t; ++it) {
    out += format_double(sg.t_at(it));
    for (int is = 0; is < sg.n_s; ++is) {
      out += ',';
      out += sg.masked(is, it) ? std::string("nan") : format_double(sg.at(is, it));
    }
    out += '\n';
  }
  return out;
}

std::string degeneracy_csv(const DegeneracyMap& map) {
  std::string out = "u,v,sigma1_residual,sigma2_residual,minsv_piL,minsv_piR,nadir_flag\n";
  for (int j = 0; j < map.grid.n_v; ++j)
    for (int i = 0; i < map.grid.n_u; ++i) {
      const DegeneracyReport& c = map.at(i, j);
      out += format_double(map.grid.u_at(i)) + ',' + format_double(map.grid.v_at(j)) + ',' +
             format_double(c.sigma1_residual) + ',' + format_double(c.sigma2_residual) + ',' +
             format_double(c.minsv_piL) + ',' + format_double(c.minsv_piR) + ',' +
             (c.nadir_flag ? "1" : "0") + '\n';
    }
  return out;
}

namespace {

std::string mirror_row(const MirrorPoint& m, int family) {
  return format_double(m.q.u) + ',' + format_double(m.q.v) + ',' + format_double(m.q.xi) + ',' +
         format_double(m.q.eta) + ',' + format_double(m.report.sigma1_residual) + ',' +
         format_double(m.report.sigma2_residual) + ',' + std::to_string(family) + '\n';
}

const char* status_name(TraceStatus s) {
  switch (s) {
    case TraceStatus::ok: return "ok";
    case TraceStatus::precondition_failed: return "precondition_failed";
    case TraceStatus::corrector_failed: return "corrector_failed";
  }
  return "?";
}

}  // namespace

std::string mirrors_csv(const MirrorSet& set) {
  std::string out = "u,v,xi,eta,sigma1_residual,sigma2_residual,family_id\n";
  for (const MirrorPoint& m : set.isolated) out += mirror_row(m, -1);
  for (std::size_t f = 0; f < set.families.size(); ++f)
    for (const MirrorPoint& m : set.families[f].points) out += mirror_row(m, static_cast<int>(f));
  return out;
}

std::string mirrors_summary(const MirrorSet& set) {
  std::ostringstream os;
  os << "p = (" << format_double(set.p.s) << ", " << format_double(set.p.t) << ", "
     << format_double(set.p.sigma) << ", " << format_double(set.p.tau) << ")\n";
  os << "region u = [" << format_double(set.region.u.lo) << ", " << format_double(set.region.u.hi)
     << "], v = [" << format_double(set.region.v.lo) << ", " << format_double(set.region.v.hi) << "]\n";
  os << "scan grid " << set.grid_n << " x " << set.grid_n << ", seeds " << set.seeds
     << ", discarded " << set.discarded_seeds << "\n";
  int nadir = 0, s1 = 0, s2 = 0;
  for (const MirrorPoint& m : set.isolated) {
    nadir += m.report.nadir_flag;
    s1 += m.report.sigma1_residual <= 1e-6;
    s2 += m.report.sigma2_residual <= 1e-6;
  }
  os << "isolated " << set.isolated.size() << " (nadir " << nadir << ", sigma1 " << s1 << ", sigma2 "
     << s2 << ")\n";
  os << "families " << set.families.size() << "\n";
  for (std::size_t f = 0; f < set.families.size(); ++f) {
    const FamilyCurve& c = set.families[f];
    os << "  family " << f << ": " << c.points.size() << " points, max residual "
       << format_double(c.max_residual) << ", status " << status_name(c.status);
    if (!c.diagnostic.empty()) os << " (" << c.diagnostic << ")";
    os << "\n";
  }
  return os.str();
}

std::string jumps_csv(const JumpReport& report) {
  std::string out = "it,t,location,magnitude,matched\n";
  for (const JumpRow& r : report.rows)
    out += std::to_string(r.it) + ',' + format_double(r.t) + ',' + format_double(r.location) + ',' +
           format_double(r.magnitude) + ',' + (r.matched ? "1" : "0") + '\n';
  return out;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string heatmap_svg(const HeatMap& map) {
  double lo = INFINITY, hi = -INFINITY;
  for (double x : map.values)
    if (std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  const bool any = lo <= hi;
  const int cell = std::max(1, 600 / std::max({map.n_x, map.n_y, 1}));
  const int w = cell * map.n_x, h = cell * map.n_y;
  const int margin = 40;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w + 2 * margin
     << "\" height=\"" << h + 3 * margin << "\">\n"
     << "<title>" << xml_escape(map.title) << "</title>\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << w + 2 * margin << "\" height=\"" << h + 3 * margin
     << "\" fill=\"#ffffff\"/>\n"
     << "<g shape-rendering=\"crispEdges\">\n";
  for (int iy = 0; iy < map.n_y; ++iy)
    for (int ix = 0; ix < map.n_x; ++ix) {
      const double x = map.values[static_cast<std::size_t>(iy) * map.n_x + ix];
      if (!std::isfinite(x)) continue;
      const double f = hi > lo ? (x - lo) / (hi - lo) : 0.5;
      const int g = static_cast<int>(std::lround(255.0 * f));
      os << "<rect x=\"" << margin + ix * cell << "\" y=\"" << margin + (map.n_y - 1 - iy) * cell
         << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << g << ',' << g << ','
         << g << ")\"/>\n";
    }
  os << "</g>\n"
     << "<text x=\"" << margin << "\" y=\"" << margin - 12 << "\" font-family=\"sans-serif\" font-size=\"14\">"
     << xml_escape(map.title) << "</text>\n"
     << "<text x=\"" << margin << "\" y=\"" << h + margin + 18 << "\" font-family=\"sans-serif\" font-size=\"12\">"
     << xml_escape(map.x_label) << " &#8594;  " << xml_escape(map.y_label) << " &#8593;</text>\n"
     << "<text x=\"" << margin << "\" y=\"" << h + margin + 36
     << "\" font-family=\"sans-serif\" font-size=\"12\">min = " << (any ? format_double(lo) : "nan")
     << " (black), max = " << (any ? format_double(hi) : "nan") << " (white)</text>\n"
     << "</svg>\n";
  return os.str();
}

HeatMap sinogram_heatmap(const Sinogram& sg, const std::string& title) {
  HeatMap m;
  m.n_x = sg.n_s;
  m.n_y = sg.n_t;
  m.values = sg.values;
  for (std::size_t k = 0; k < m.values.size(); ++k)
    if (sg.mask[k]) m.values[k] = NAN;
  m.title = title;
  m.x_label = "s";
  m.y_label = "t";
  return m;
}

SceneField read_scene_csv(const std::filesystem::path& file, const SurfaceChart& chart, Interval u,
                          Interval v) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open scene file");
  std::vector<double> values;
  int n_u = -1, n_v = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    int count = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      std::string cell = line.substr(pos, end - pos);
      cell.erase(0, cell.find_first_not_of(" \t"));
      cell.erase(cell.find_last_not_of(" \t") + 1);
      double x = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(x))
        throw ConfigError(file.string() + ":" + std::to_string(lineno) + ": bad scene value '" + cell + "'");
      values.push_back(x);
      ++count;
      if (end == line.size()) break;
      pos = end + 1;
    }
    if (n_u < 0) n_u = count;
    if (count != n_u)
      throw ConfigError(file.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(n_u) +
                        " values, found " + std::to_string(count));
    ++n_v;
  }
  if (n_v == 0) throw ConfigError(file.string() + ": scene file has no data rows");
  return SceneField(chart, u, v, n_u, n_v, std::move(values));
}

nlohmann::ordered_json to_json(const SmoothnessScore& s) {
  nlohmann::ordered_json j;
  j["highfreq_ratio"] = s.highfreq_ratio;
  j["max_cell_jump"] = s.max_cell_jump;
  j["ratio_threshold"] = s.ratio_threshold;
  j["jump_threshold"] = s.jump_threshold;
  j["below_zero_floor"] = s.below_floor;
  j["rows_used"] = s.rows_used;
  j["verdict"] = s.verdict == Verdict::smooth ? "smooth" : "singular";
  return j;
}

nlohmann::ordered_json to_json(const CancellationReport& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["reference_norm"] = r.reference_norm;
  j["residual_norm"] = r.residual_norm;
  j["ratio"] = r.ratio;
  j["tol_cancel"] = r.tolerance;
  j["reference_smoothness"] = to_json(r.reference_smoothness);
  j["residual_smoothness"] = to_json(r.residual_smoothness);
  j["scene_jump"] = {{"across_jump_line", r.scene_jump.jump}, {"baseline", r.scene_jump.baseline}, {"scale", r.scene_jump.scale}};
  j["degenerate_reference"] = r.degenerate_reference;
  j["pass"] = r.pass;
  j["note"] = r.note;
  return j;
}

nlohmann::ordered_json to_json(const JumpReport& r) {
  nlohmann::ordered_json j;
  j["rows_considered"] = r.rows_considered;
  j["rows_matched"] = r.rows_matched;
  j["match_fraction"] = r.match_fraction;
  j["max_jump"] = r.max_jump;
  j["jump_threshold"] = r.jump_threshold;
  j["significant"] = r.significant;
  return j;
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 15];
  }
  return out;
}

}  // namespace sarml
