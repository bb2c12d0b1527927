#include "arcfit/refcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arcfit {

namespace {

constexpr int kMaxHalvings = 40;

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// Solves a 3x3 system by Gaussian elimination with partial pivoting.
bool solve3(Mat3 a, Vec3 b, Vec3& x) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int k = col; k < 3; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < 3; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

}  // namespace

double exact_objective_sq(std::span<const Point2> points, const Circle& c) {
  if (points.empty()) throw std::invalid_argument("exact_objective_sq: no points");
  double s = 0.0;
  for (const Point2& p : points) {
    const Point2 d = p - c.center;
    const double e = dot(d, d) - c.r * c.r;
    s += e * e;
  }
  return s;
}

double exact_sse(std::span<const Point2> points, const Circle& c) {
  if (points.empty()) throw std::invalid_argument("exact_sse: no points");
  double s = 0.0;
  for (const Point2& p : points) {
    const double e = distance(p, c.center) - c.r;
    s += e * e;
  }
  return s;
}

Circle geometric_fit(std::span<const Point2> points, const Circle& start, const GeometricFitOptions& options) {
  if (points.size() < 3) throw std::invalid_argument("geometric_fit: needs at least three points");
  if (!is_valid(start)) throw std::invalid_argument("geometric_fit: invalid start circle");

  Circle c = start;
  double sse = exact_sse(points, c);
  for (int it = 0; it < options.max_iterations; ++it) {
    Mat3 jtj{};
    Vec3 jtr{};
    for (const Point2& p : points) {
      const Point2 d = p - c.center;
      const double dist = norm(d);
      if (dist == 0.0) continue;
      const Vec3 row{-d.x / dist, -d.y / dist, -1.0};
      const double res = dist - c.r;
      for (int i = 0; i < 3; ++i) {
        jtr[i] += row[i] * res;
        for (int k = 0; k < 3; ++k) jtj[i][k] += row[i] * row[k];
      }
    }
    Vec3 step{};
    if (!solve3(jtj, -1.0 * jtr, step))
      throw FitError(FitErrorKind::CollinearOrDegenerate, "geometric_fit: singular normal equations");

    double scale = 1.0;
    bool improved = false;
    Circle next = c;
    double next_sse = sse;
    for (int h = 0; h < kMaxHalvings; ++h, scale *= 0.5) {
      next = {{c.center.x + scale * step[0], c.center.y + scale * step[1]}, c.r + scale * step[2]};
      if (!is_valid(next)) continue;
      next_sse = exact_sse(points, next);
      if (next_sse <= sse) {
        improved = true;
        break;
      }
    }
    const double change = scale * norm(step) / c.r;
    if (!improved) return c;  // no descent left at working precision
    c = next;
    sse = next_sse;
    if (change <= options.rel_tol) return c;
  }
  throw FitError(FitErrorKind::NonConvergence, "geometric_fit: iteration budget exhausted");
}

Arc make_arc(const Circle& circle, Point2 start, Point2 end, Point2 via) {
  if (!is_valid(circle)) throw std::invalid_argument("make_arc: invalid circle");
  if (start == end) throw std::invalid_argument("make_arc: endpoints coincide");
  const double tol = 1e-9 * circle.r;
  if (std::abs(distance(start, circle.center) - circle.r) > tol || std::abs(distance(end, circle.center) - circle.r) > tol)
    throw std::invalid_argument("make_arc: endpoints are not on the circle");

  Arc arc;
  arc.circle = circle;
  arc.start = start;
  arc.end = end;
  const Point2 ds = start - circle.center;
  arc.theta_start = std::atan2(ds.y, ds.x);
  const auto angle_of = [&](Point2 p) {
    const Point2 d = p - circle.center;
    return wrap_angle(std::atan2(d.y, d.x) - arc.theta_start);
  };
  const double ccw = angle_of(end);
  const double via_ccw = angle_of(via);
  arc.sweep = (via_ccw < ccw) ? ccw : -(kTwoPi - ccw);
  return arc;
}

double arc_parameter(const Arc& arc, Point2 p) {
  const Point2 d = p - arc.circle.center;
  const double theta = std::atan2(d.y, d.x) - arc.theta_start;
  return wrap_angle(arc.sweep >= 0.0 ? theta : -theta);
}

double arc_deviation(Point2 p, const Arc& arc) {
  const Point2 d = p - arc.circle.center;
  if (norm(d) > 0.0 && arc_parameter(arc, p) <= std::abs(arc.sweep)) return std::abs(norm(d) - arc.circle.r);
  if (norm(d) == 0.0) return arc.circle.r;  // every direction is inside some span; radial distance is r
  return std::min(distance(p, arc.start), distance(p, arc.end));
}

DeviationReport check_tolerance_zigzag(std::span<const Point2> interior, const Arc& arc, double tol) {
  DeviationReport rep;
  double prev = 0.0;
  for (const Point2& p : interior) {
    const double dev = arc_deviation(p, arc);
    rep.max_dev = std::max(rep.max_dev, dev);
    rep.sum_sq += dev * dev;
    const double t = arc_parameter(arc, p);
    if (!(t > prev)) rep.monotone = false;
    prev = t;
  }
  if (!(std::abs(arc.sweep) > prev)) rep.monotone = false;
  rep.passes = rep.monotone && rep.max_dev <= tol;
  return rep;
}

bool passes_tolerance_zigzag(std::span<const Point2> interior, const Arc& arc, double tol, std::size_t* reads) {
  double prev = 0.0;
  std::size_t k = 0;
  bool ok = true;
  for (; k < interior.size(); ++k) {
    const Point2 p = interior[k];
    const double t = arc_parameter(arc, p);
    if (!(t > prev) || !(arc_deviation(p, arc) <= tol)) {
      ok = false;
      ++k;
      break;
    }
    prev = t;
  }
  if (reads) *reads = k;
  return ok && std::abs(arc.sweep) > prev;
}

}  // namespace arcfit
