#include "arcfit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace arcfit {

namespace {

using nlohmann::json;

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Point2> parse_points(std::istream& in, const std::string& source) {
  std::vector<Point2> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    std::string xs, ys, extra;
    fields >> xs >> ys;
    if (ys.empty()) throw ParseError(source, lineno, "expected two numbers");
    if (fields >> extra) throw ParseError(source, lineno, "unexpected trailing field '" + extra + "'");
    Point2 p;
    if (!parse_double(xs, p.x) || !parse_double(ys, p.y))
      throw ParseError(source, lineno, "not a finite number pair: '" + std::string(t) + "'");
    pts.push_back(p);
  }
  return pts;
}

std::vector<Point2> read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return parse_points(in, path);
}

Point2 parse_point_pair(const std::string& text) {
  const auto comma = text.find(',');
  Point2 p;
  if (comma == std::string::npos || !parse_double(trim(std::string_view(text).substr(0, comma)), p.x) ||
      !parse_double(trim(std::string_view(text).substr(comma + 1)), p.y))
    throw std::invalid_argument("expected x,y but got '" + text + "'");
  return p;
}

json to_json(Point2 p) { return json::array({p.x, p.y}); }

json to_json(const Circle& c) { return {{"center", to_json(c.center)}, {"radius", c.r}}; }

json to_json(const Primitive& p, std::span<const Point2> polyline) {
  json j = {
      {"type", p.kind == PrimitiveKind::Arc ? "arc" : "segment"},
      {"from", p.from},
      {"to", p.to},
      {"start", to_json(polyline[p.from])},
      {"end", to_json(polyline[p.to])},
      {"penalty", p.penalty},
      {"ssd", p.ssd},
  };
  if (p.arc) {
    j["center"] = to_json(p.arc->circle.center);
    j["radius"] = p.arc->circle.r;
    j["theta_start"] = p.arc->theta_start;
    j["sweep"] = p.arc->sweep;
  }
  return j;
}

json to_json(const CompressedPath& path, std::span<const Point2> polyline, double tol) {
  json prims = json::array();
  for (const Primitive& p : path.primitives) prims.push_back(to_json(p, polyline));
  return {
      {"tol", tol},
      {"vertex_count", polyline.size()},
      {"total_penalty", path.total_penalty},
      {"total_ssd", path.total_ssd},
      {"exact_ssd", path.exact_ssd},
      {"segments", path.segment_count()},
      {"arcs", path.arc_count()},
      {"primitives", prims},
  };
}

Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("point must be a two-element array");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

CompressedPath compressed_path_from_json(const json& j) {
  try {
    CompressedPath path;
    path.total_penalty = j.at("total_penalty").get<int>();
    path.total_ssd = j.at("total_ssd").get<double>();
    path.exact_ssd = j.at("exact_ssd").get<double>();
    for (const json& e : j.at("primitives")) {
      Primitive p;
      const std::string type = e.at("type").get<std::string>();
      if (type != "arc" && type != "segment") throw std::invalid_argument("unknown primitive type " + type);
      p.kind = type == "arc" ? PrimitiveKind::Arc : PrimitiveKind::Segment;
      p.from = e.at("from").get<std::size_t>();
      p.to = e.at("to").get<std::size_t>();
      p.penalty = e.at("penalty").get<int>();
      p.ssd = e.at("ssd").get<double>();
      if (p.kind == PrimitiveKind::Arc) {
        Arc a;
        a.circle = {point_from_json(e.at("center")), e.at("radius").get<double>()};
        a.start = point_from_json(e.at("start"));
        a.end = point_from_json(e.at("end"));
        a.theta_start = e.at("theta_start").get<double>();
        a.sweep = e.at("sweep").get<double>();
        p.arc = a;
      }
      path.primitives.push_back(p);
    }
    return path;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("compressed path schema: ") + e.what());
  }
}

}  // namespace arcfit
