#include <doctest.h>

#include <sstream>

#include "arcfit/compress.hpp"
#include "arcfit/io.hpp"

using namespace arcfit;

TEST_CASE("point parsing") {
  std::istringstream in("# header\n1 2\n\n  -3.5\t4e-1  \n   # indented comment\n+5 6\n");
  const auto pts = parse_points(in);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0] == Point2{1, 2});
  CHECK(pts[1] == Point2{-3.5, 0.4});
  CHECK(pts[2] == Point2{5, 6});
}

TEST_CASE("parse errors carry the line number") {
  const auto fails_at = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      parse_points(in, "f.txt");
      return false;
    } catch (const ParseError& e) {
      return e.line() == line && std::string(e.what()).rfind("f.txt:", 0) == 0;
    }
  };
  CHECK(fails_at("1 2\n3\n", 2));
  CHECK(fails_at("1 2\n3 4 5\n", 2));
  CHECK(fails_at("# c\n\nx 1\n", 3));
  CHECK(fails_at("1 nan\n", 1));
  CHECK(fails_at("1 2abc\n", 1));
}

TEST_CASE("missing file") { CHECK_THROWS_AS(read_points_file("/nonexistent/points.txt"), std::invalid_argument); }

TEST_CASE("anchor pairs") {
  CHECK(parse_point_pair("1,0") == Point2{1, 0});
  CHECK(parse_point_pair(" -2.5 , 3 ") == Point2{-2.5, 3});
  CHECK_THROWS_AS(parse_point_pair("1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_point_pair("a,b"), std::invalid_argument);
}

TEST_CASE("compressed path JSON round trip") {
  std::vector<Point2> pts;
  for (int k = 0; k < 12; ++k) pts.push_back({std::cos(kPi * k / 11), std::sin(kPi * k / 11)});
  pts.push_back({-2, 0});
  pts.push_back({-3, 0});
  const auto path = compress(pts, 1e-9);
  const auto j = to_json(path, pts, 1e-9);
  CHECK(j.at("segments") == 1);
  CHECK(j.at("arcs") == 1);
  const auto back = compressed_path_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.total_penalty == path.total_penalty);
  CHECK(back.total_ssd == path.total_ssd);
  CHECK(back.exact_ssd == path.exact_ssd);
  REQUIRE(back.primitives.size() == path.primitives.size());
  for (std::size_t k = 0; k < path.primitives.size(); ++k) {
    const auto& a = path.primitives[k];
    const auto& b = back.primitives[k];
    CHECK(a.kind == b.kind);
    CHECK(a.from == b.from);
    CHECK(a.to == b.to);
    CHECK(a.ssd == b.ssd);
    CHECK(a.arc.has_value() == b.arc.has_value());
    if (a.arc) {
      CHECK(a.arc->circle.r == b.arc->circle.r);
      CHECK(a.arc->circle.center == b.arc->circle.center);
      CHECK(a.arc->sweep == b.arc->sweep);
      CHECK(a.arc->start == b.arc->start);
    }
  }
  CHECK(to_json(back, pts, 1e-9) == j);
  CHECK_THROWS_AS(compressed_path_from_json(nlohmann::json::object()), std::invalid_argument);
}
