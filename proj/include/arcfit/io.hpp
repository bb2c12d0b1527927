#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "arcfit/compress.hpp"
#include "arcfit/geometry.hpp"

namespace arcfit {

/// Malformed text input; the message carries the source and line number.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::invalid_argument(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One "x y" pair per line. Blank lines and lines starting with '#' (after
/// leading whitespace) are skipped.
std::vector<Point2> parse_points(std::istream& in, const std::string& source = "<input>");
std::vector<Point2> read_points_file(const std::string& path);

/// "x,y" as used by --through.
Point2 parse_point_pair(const std::string& text);

nlohmann::json to_json(Point2 p);
nlohmann::json to_json(const Circle& c);
nlohmann::json to_json(const Primitive& p, std::span<const Point2> polyline);
nlohmann::json to_json(const CompressedPath& path, std::span<const Point2> polyline, double tol);

Point2 point_from_json(const nlohmann::json& j);
/// Rebuilds the path written by to_json; throws std::invalid_argument on a
/// schema mismatch.
CompressedPath compressed_path_from_json(const nlohmann::json& j);

}  // namespace arcfit
