#include <doctest.h>

#include <cmath>
#include <vector>

#include "arcfit/compress.hpp"
#include "arcfit/fit.hpp"
#include "oracles.hpp"

using namespace arcfit;

namespace {

std::vector<Point2> semicircle(int n) {
  std::vector<Point2> pts;
  for (int k = 0; k < n; ++k) pts.push_back({std::cos(kPi * k / (n - 1)), std::sin(kPi * k / (n - 1))});
  return pts;
}

bool same_score(const CompressedPath& p, const oracle::ChainScore& s) {
  return p.total_penalty == s.penalty && std::abs(p.total_ssd - s.ssd) <= 1e-12 * (1.0 + s.ssd);
}

}  // namespace

TEST_CASE("prefix moments") {
  oracle::Rng rng(1);
  std::vector<Point2> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
  const PrefixMoments pre(pts);
  CHECK(pre.vertex_count() == 40);
  CHECK(pre.prefix(0).empty());
  CHECK(pre.prefix(3).weight() == 3.0);
  for (int t = 0; t < 50; ++t) {
    std::size_t a = rng.integer(0, 39), b = rng.integer(0, 40);
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    const auto range = pre.range(a, b);
    const auto direct = accumulate_points(std::span(pts).subspan(a, b - a));
    CHECK(range.weight() == doctest::Approx(direct.weight()));
    for (int k = 0; k <= kMomentOrder; ++k)
      for (int h = 0; h <= k; ++h) {
        const double x = range.sum(k - h, h), y = direct.sum(k - h, h);
        CHECK(std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y)));
      }
  }
  const auto whole = pre.range(0, 40);
  CHECK(whole.weight() == 40.0);
  CHECK_THROWS_AS(pre.range(5, 41), std::out_of_range);
  CHECK_THROWS_AS(PrefixMoments(std::span<const Point2>{}), std::invalid_argument);
}

TEST_CASE("segment candidates") {
  SUBCASE("collinear") {
    const std::vector<Point2> pts{{0, 0}, {1, 1}, {2, 2}};
    const auto c = candidate_segment(pts, 0, 2, 0.0);
    REQUIRE(c);
    CHECK(c->penalty == 2);
    CHECK(c->ssd == 0.0);
  }
  SUBCASE("right angle") {
    const std::vector<Point2> pts{{0, 0}, {1, 1}, {2, 0}};
    CHECK_FALSE(candidate_segment(pts, 0, 2, 0.99));
    const auto c = candidate_segment(pts, 0, 2, 1.0);
    REQUIRE(c);
    CHECK(c->ssd == 1.0);
  }
  SUBCASE("endpoint clamping") {
    const std::vector<Point2> pts{{0, 0}, {3, 0}, {1, 0}};
    const auto c = candidate_segment(pts, 0, 2, 2.0);
    REQUIRE(c);
    CHECK(c->ssd == 4.0);
  }
  SUBCASE("adjacent vertices always pass") {
    const std::vector<Point2> pts{{0, 0}, {5, 7}};
    CHECK(candidate_segment(pts, 0, 1, 0.0));
  }
}

TEST_CASE("arc candidates") {
  SUBCASE("exact quarter circle") {
    std::vector<Point2> pts;
    for (int k = 0; k < 10; ++k) pts.push_back({3 + 2 * std::cos(kPi / 2 * k / 9), -1 + 2 * std::sin(kPi / 2 * k / 9)});
    const PrefixMoments pre(pts);
    const auto c = candidate_arc(pts, pre, 0, 9, 1e-9);
    REQUIRE(c);
    REQUIRE(c->arc);
    CHECK(c->penalty == 3);
    CHECK(c->ssd <= 1e-12 * 4.0);  // moment cancellation leaves round-off of order eps r^2
    CHECK(distance(c->arc->circle.center, {3, -1}) <= 1e-9 * 2);
    CHECK(c->arc->circle.r == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("straight line") {
    std::vector<Point2> pts;
    for (int k = 0; k < 10; ++k) pts.push_back({double(k), 0.5 * k});
    const PrefixMoments pre(pts);
    CHECK_FALSE(candidate_arc(pts, pre, 0, 9, 1.0));
  }
  SUBCASE("too few interior vertices") {
    const auto pts = semicircle(5);
    const PrefixMoments pre(pts);
    CHECK_FALSE(candidate_arc(pts, pre, 0, 2, 1.0));
    CHECK(candidate_arc(pts, pre, 0, 3, 1e-9));
  }
  SUBCASE("noisy arc inside tolerance") {
    oracle::Rng rng(2);
    const double tol = 0.02;
    const auto pts = oracle::arc_points(rng, {{0, 0}, 5}, 0.1, 1.5, 60, tol / 2);
    // Anchor ends on the circle so the noise stays within tol of the fit.
    std::vector<Point2> poly = pts;
    poly.front() = {5 * std::cos(0.1), 5 * std::sin(0.1)};
    poly.back() = {5 * std::cos(1.6), 5 * std::sin(1.6)};
    const PrefixMoments pre(poly);
    const auto c = candidate_arc(poly, pre, 0, poly.size() - 1, tol);
    REQUIRE(c);
    Primitive p;
    p.kind = PrimitiveKind::Arc;
    p.from = 0;
    p.to = poly.size() - 1;
    p.arc = c->arc;
    const double exact = primitive_exact_ssd(poly, p);
    CHECK(std::abs(c->ssd - exact) <= 0.1 * exact);
  }
}

TEST_CASE("arc fitting cost does not grow with the window") {
  const auto pts = semicircle(400);
  const PrefixMoments pre(pts);
  CandidateCounters small, large;
  candidate_arc(pts, pre, 10, 14, 1e-9, 3, &small);
  candidate_arc(pts, pre, 0, 399, 1e-9, 3, &large);
  CHECK(small.fit_point_reads == large.fit_point_reads);
  CHECK(small.moment_accumulator_reads == large.moment_accumulator_reads);
  CHECK(small.validation_point_reads == 3);
  CHECK(large.validation_point_reads == 398);
}

TEST_CASE("compress examples") {
  SUBCASE("three collinear vertices") {
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {2, 0}};
    const auto p = compress(pts, 1e-9);
    REQUIRE(p.primitives.size() == 1);
    CHECK(p.primitives[0].kind == PrimitiveKind::Segment);
    CHECK(p.total_penalty == 2);
    CHECK(p.total_ssd == 0.0);
  }
  SUBCASE("semicircle") {
    const auto p = compress(semicircle(20), 1e-9);
    REQUIRE(p.primitives.size() == 1);
    CHECK(p.primitives[0].kind == PrimitiveKind::Arc);
    CHECK(p.total_penalty == 3);
  }
  SUBCASE("zero tolerance on noisy data keeps every vertex") {
    oracle::Rng rng(3);
    const auto pts = oracle::arc_points(rng, {{0, 0}, 1}, 0.0, 2.0, 15, 0.01);
    const auto p = compress(pts, 0.0);
    CHECK(p.arc_count() == 0);
    CHECK(p.segment_count() == 14);
  }
  SUBCASE("two vertices") {
    const auto p = compress(std::vector<Point2>{{0, 0}, {1, 1}}, 0.0);
    CHECK(p.segment_count() == 1);
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(compress(std::vector<Point2>{{0, 0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(compress(std::vector<Point2>{{0, 0}, {1, 1}}, -1.0), std::invalid_argument);
  }
}

TEST_CASE("chain covers the polyline and respects the tolerance") {
  oracle::Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<Point2> pts;
    Point2 p{0, 0};
    for (int i = 0; i < 40; ++i) {
      pts.push_back(p);
      p = p + Point2{rng.uniform(0.5, 1.5), rng.uniform(-1, 1)};
    }
    const double tol = rng.uniform(0.05, 0.5);
    const auto path = compress(pts, tol);
    REQUIRE_FALSE(path.primitives.empty());
    CHECK(path.primitives.front().from == 0);
    CHECK(path.primitives.back().to == pts.size() - 1);
    int pen = 0;
    for (std::size_t k = 0; k < path.primitives.size(); ++k) {
      const auto& pr = path.primitives[k];
      if (k > 0) CHECK(pr.from == path.primitives[k - 1].to);
      pen += pr.penalty;
      for (std::size_t v = pr.from + 1; v < pr.to; ++v) {
        if (pr.arc) CHECK(arc_deviation(pts[v], *pr.arc) <= tol);
      }
    }
    CHECK(pen == path.total_penalty);
    CHECK(path.total_penalty == 2 * static_cast<int>(path.segment_count()) + 3 * static_cast<int>(path.arc_count()));
  }
}

TEST_CASE("matches brute-force enumeration on small inputs") {
  oracle::Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const int n = rng.integer(3, 10);
    std::vector<Point2> pts;
    if (t % 2 == 0) {
      pts = oracle::arc_points(rng, {{0, 0}, 3}, rng.uniform(0, kTwoPi), rng.uniform(1, 4), n, 0.01);
    } else {
      Point2 p{0, 0};
      for (int i = 0; i < n; ++i) {
        pts.push_back(p);
        p = p + Point2{rng.uniform(0.5, 1.5), rng.uniform(-0.3, 0.3)};
      }
    }
    CompressOptions o;
    o.tol = rng.uniform(0.005, 0.2);
    const auto path = compress(pts, o);
    const auto brute = oracle::brute_force_chains(pts, o);
    CHECK(same_score(path, brute));
  }
}

TEST_CASE("smaller tolerance never lowers the penalty") {
  oracle::Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const auto pts = oracle::arc_points(rng, {{0, 0}, 10}, 0.0, 2.5, 40, 0.05);
    int prev = 0;
    for (double tol : {1.0, 0.3, 0.1, 0.05, 0.02, 0.005, 0.0}) {
      const int pen = compress(pts, tol).total_penalty;
      CHECK(pen >= prev);
      prev = pen;
    }
  }
}

TEST_CASE("custom penalties") {
  CompressOptions o;
  o.tol = 1e-9;
  o.arc_penalty = 100;
  const auto p = compress(semicircle(10), o);
  CHECK(p.arc_count() == 0);
}

TEST_CASE("parallel, serial and filtered runs") {
  oracle::Rng rng(7);
  std::vector<Point2> pts;
  for (int arc = 0; arc < 3; ++arc) {
    const auto a = oracle::arc_points(rng, {{arc * 10.0, 0}, 4}, kPi, -kPi * 0.8, 60);
    pts.insert(pts.end(), a.begin(), a.end());
  }
  CompressOptions o;
  o.tol = 1e-3;
  const auto par = compress(pts, o);
  o.parallel = false;
  const auto ser = compress(pts, o);
  CHECK(par.total_penalty == ser.total_penalty);
  CHECK(par.total_ssd == ser.total_ssd);
  REQUIRE(par.primitives.size() == ser.primitives.size());
  for (std::size_t k = 0; k < par.primitives.size(); ++k) {
    CHECK(par.primitives[k].from == ser.primitives[k].from);
    CHECK(par.primitives[k].to == ser.primitives[k].to);
  }
  o.filtered = true;
  const auto fil = compress(pts, o);
  CHECK(fil.total_penalty >= ser.total_penalty);
  CHECK(fil.primitives.front().from == 0);
  CHECK(fil.primitives.back().to == pts.size() - 1);
  o.parallel = true;
  const auto filp = compress(pts, o);
  CHECK(filp.total_penalty == fil.total_penalty);
  CHECK(filp.total_ssd == fil.total_ssd);
}

TEST_CASE("exact ssd is recomputed per primitive") {
  oracle::Rng rng(8);
  const auto pts = oracle::arc_points(rng, {{0, 0}, 5}, 0.0, 2.0, 30, 0.01);
  const auto p = compress(pts, 0.05);
  double sum = 0.0;
  for (const auto& pr : p.primitives) sum += primitive_exact_ssd(pts, pr);
  CHECK(p.exact_ssd == doctest::Approx(sum));
  CHECK(p.exact_ssd == doctest::Approx(p.total_ssd).epsilon(0.1));
}
