#include "arcfit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arcfit {

namespace {

constexpr double kKasaMaxCondition = 1e12;
constexpr double kMaxRadiusRatio = 1e8;
constexpr double kRadiusGuard = 1e-12;

Point2 to_local(const NormalizedMoments& m, Point2 p) { return p - m.origin; }
Point2 to_world(const NormalizedMoments& m, Point2 p) { return p + m.origin; }

// Coefficients for an estimate given in the moments' frame.
FitCoeffs coeffs_local(const NormalizedMoments& m, double xe, double ye, double re) {
  const double m10 = m(1, 0), m01 = m(0, 1);
  const double m20 = m(2, 0), m11 = m(1, 1), m02 = m(0, 2);
  const double m30 = m(3, 0), m21 = m(2, 1), m12 = m(1, 2), m03 = m(0, 3);
  const double m40 = m(4, 0), m22 = m(2, 2), m04 = m(0, 4);

  FitCoeffs c;
  const double re2 = re * re;
  c.z = xe * xe + ye * ye - re2;
  c.zx = 3.0 * xe * xe + ye * ye - re2;
  c.zy = xe * xe + 3.0 * ye * ye - re2;
  const double z = c.z;

  c.v = (m40 + 2.0 * m22 + m04) - 4.0 * (m30 + m12) * xe - 4.0 * (m21 + m03) * ye + 8.0 * m11 * xe * ye +
        2.0 * m20 * c.zx + 2.0 * m02 * c.zy - 4.0 * (m10 * xe + m01 * ye) * z + z * z;
  c.vx = 4.0 * (-(m30 + m12) + (3.0 * m20 + m02) * xe + 2.0 * m11 * ye - 2.0 * m01 * xe * ye - m10 * c.zx + xe * z);
  c.vy = 4.0 * (-(m21 + m03) + (m20 + 3.0 * m02) * ye + 2.0 * m11 * xe - 2.0 * m10 * xe * ye - m01 * c.zy + ye * z);
  c.vr = -2.0 * (m20 + m02 - 2.0 * (m10 * xe + m01 * ye) + z);
  c.vxx = 4.0 * (m20 - 2.0 * m10 * xe + xe * xe);
  c.vyy = 4.0 * (m02 - 2.0 * m01 * ye + ye * ye);
  c.vxy = 8.0 * (m11 - m01 * xe - m10 * ye + xe * ye);
  c.vxr = 4.0 * (m10 - xe);
  c.vyr = 4.0 * (m01 - ye);
  return c;
}

double objective_local(const NormalizedMoments& m, const Circle& local) {
  const FitCoeffs c = coeffs_local(m, local.center.x, local.center.y, local.r);
  return std::max(c.v, 0.0) / (4.0 * local.r * local.r);
}

AnchoredQuadForms quad_forms_local(const NormalizedMoments& m, Point2 a) {
  const double m10 = m(1, 0), m01 = m(0, 1);
  const double m20 = m(2, 0), m11 = m(1, 1), m02 = m(0, 2);
  const double m30 = m(3, 0), m21 = m(2, 1), m12 = m(1, 2), m03 = m(0, 3);
  const double m40 = m(4, 0), m22 = m(2, 2), m04 = m(0, 4);
  const double xa = a.x, ya = a.y;
  const double rho = xa * xa + ya * ya;

  const double axx = 4.0 * (m20 - 2.0 * m10 * xa + xa * xa);
  const double ayy = 4.0 * (m02 - 2.0 * m01 * ya + ya * ya);
  const double a11 = m40 + 2.0 * m22 + m04 - 2.0 * (m20 + m02) * rho + rho * rho;
  const double axy = 4.0 * (m11 - m10 * ya - m01 * xa + xa * ya);
  const double ax1 = -2.0 * (m30 + m12 - (m20 + m02) * xa - m10 * rho + rho * xa);
  const double ay1 = -2.0 * (m21 + m03 - (m20 + m02) * ya - m01 * rho + rho * ya);

  AnchoredQuadForms f;
  f.a = {{{axx, axy, ax1}, {axy, ayy, ay1}, {ax1, ay1, a11}}};
  f.b = {{{1.0, 0.0, -xa}, {0.0, 1.0, -ya}, {-xa, -ya, rho}}};
  f.anchor = a + m.origin;
  f.origin = m.origin;
  return f;
}

Mat3 adjugate(const Mat3& m) {
  Mat3 adj{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      adj[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  }
  return adj;
}

double trace_product(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][i];
  return s;
}

// Unconstrained objective over a fixed (dx, dy, dr) frame anchored at `start`
// (moments' frame). Line restrictions and Hessian proxies are rebuilt at the
// moved estimate and mapped back into the fixed frame.
class FreeObjective {
 public:
  FreeObjective(const NormalizedMoments& m, const Circle& start) : m_(m), start_(start) {}

  bool at(const Vec3& x, Circle& out) const {
    const double r2 = start_.r * start_.r + x[0] * x[0] + x[1] * x[1] + x[2];
    if (!(r2 > kRadiusGuard * start_.r * start_.r)) return false;
    out = {{start_.center.x + x[0], start_.center.y + x[1]}, std::sqrt(r2)};
    return true;
  }

  double value(const Vec3& x) const {
    Circle c;
    if (!at(x, c)) return std::numeric_limits<double>::infinity();
    return objective_local(m_, c);
  }

  // Frame change from fixed deltas to deltas around the moved estimate:
  // dr' = dr + 2 x0 dx + 2 x1 dy.
  static Mat3 frame_map(const Vec3& x) { return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {2.0 * x[0], 2.0 * x[1], 1.0}}}; }

  Mat3 hessian_proxy(const Vec3& x) const {
    Circle c;
    if (!at(x, c)) throw std::invalid_argument("estimate left the valid radius domain");
    const FitCoeffs k = coeffs_local(m_, c.center.x, c.center.y, c.r);
    const Mat3 d = d_proxy(k, c.r).matrix();
    const Mat3 f = frame_map(x);
    return transpose(f) * d * f;
  }

  QuadRatio line_ratio(const Vec3& x, const Vec3& dir) const {
    Circle c;
    if (!at(x, c)) throw std::invalid_argument("estimate left the valid radius domain");
    const FitCoeffs k = coeffs_local(m_, c.center.x, c.center.y, c.r);
    return arcfit::line_ratio(k, c.r, frame_map(x) * dir);
  }

 private:
  const NormalizedMoments& m_;
  Circle start_;
};

// Objective over the center offset from `start`; the radius is the distance
// to the anchor, so dr = 2 dx (xe - xa) + 2 dy (ye - ya).
class AnchoredObjective {
 public:
  AnchoredObjective(const NormalizedMoments& m, Point2 anchor, Point2 start)
      : m_(m), anchor_(anchor), start_(start), r0_(distance(start, anchor)) {}

  bool at(const Vec2& x, Circle& out) const {
    const Point2 c{start_.x + x[0], start_.y + x[1]};
    const double r = distance(c, anchor_);
    if (!(r * r > kRadiusGuard * r0_ * r0_)) return false;
    out = {c, r};
    return true;
  }

  double value(const Vec2& x) const {
    Circle c;
    if (!at(x, c)) return std::numeric_limits<double>::infinity();
    return objective_local(m_, c);
  }

  Mat2 hessian_proxy(const Vec2& x) const {
    Circle c;
    if (!at(x, c)) throw std::invalid_argument("center reached the anchor");
    const FitCoeffs k = coeffs_local(m_, c.center.x, c.center.y, c.r);
    const Mat3 d = d_proxy(k, c.r).matrix();
    const double jx = 2.0 * (c.center.x - anchor_.x);
    const double jy = 2.0 * (c.center.y - anchor_.y);
    // J' D J with J = [[1, 0], [0, 1], [jx, jy]]
    const Vec3 col0{1.0, 0.0, jx};
    const Vec3 col1{0.0, 1.0, jy};
    const Vec3 d0 = d * col0;
    const Vec3 d1 = d * col1;
    return {{{dot(col0, d0), dot(col0, d1)}, {dot(col1, d0), dot(col1, d1)}}};
  }

  QuadRatio line_ratio(const Vec2& x, const Vec2& dir) const {
    Circle c;
    if (!at(x, c)) throw std::invalid_argument("center reached the anchor");
    const FitCoeffs k = coeffs_local(m_, c.center.x, c.center.y, c.r);
    const Vec3 dir3{dir[0], dir[1],
                    2.0 * dir[0] * (c.center.x - anchor_.x) + 2.0 * dir[1] * (c.center.y - anchor_.y)};
    return arcfit::line_ratio(k, c.r, dir3);
  }

 private:
  const NormalizedMoments& m_;
  Point2 anchor_;
  Point2 start_;
  double r0_;
};

}  // namespace

Circle apply(const Circle& estimate, const Delta& step) {
  const double r2 = estimate.r * estimate.r + step.dx * step.dx + step.dy * step.dy + step.dr;
  if (!(r2 > 0.0)) throw std::invalid_argument("step makes the squared radius non-positive");
  return {{estimate.center.x + step.dx, estimate.center.y + step.dy}, std::sqrt(r2)};
}

double FitCoeffs::numerator(const Delta& d) const {
  return v + vx * d.dx + vy * d.dy + vr * d.dr + vxx * d.dx * d.dx + vyy * d.dy * d.dy + d.dr * d.dr +
         vxy * d.dx * d.dy + vxr * d.dx * d.dr + vyr * d.dy * d.dr;
}

double ratio_at(const FitCoeffs& c, double re, const Delta& step) {
  return c.numerator(step) / (4.0 * (re * re + step.dx * step.dx + step.dy * step.dy + step.dr));
}

Circle kasa_fit(const NormalizedMoments& m) {
  const Point2 mean{m(1, 0), m(0, 1)};
  const NormalizedMoments c = recentered(m, to_world(m, mean));
  const double cxx = c(2, 0), cxy = c(1, 1), cyy = c(0, 2);

  const double half_trace = 0.5 * (cxx + cyy);
  const double spread = std::hypot(0.5 * (cxx - cyy), cxy);
  const double lmax = half_trace + spread;
  const double lmin = half_trace - spread;
  if (!(lmax > 0.0) || !(lmin > 0.0) || lmax > kKasaMaxCondition * lmin)
    throw FitError(FitErrorKind::CollinearOrDegenerate, "algebraic normal system is singular (points on a line?)");

  const double sx = 0.5 * (c(3, 0) + c(1, 2));
  const double sy = 0.5 * (c(2, 1) + c(0, 3));
  const double det = cxx * cyy - cxy * cxy;
  const double a = (sx * cyy - sy * cxy) / det;
  const double b = (sy * cxx - sx * cxy) / det;
  const double r = std::sqrt(a * a + b * b + cxx + cyy);
  return {to_world(c, {a, b}), r};
}

FitCoeffs fit_coeffs(const NormalizedMoments& m, const Circle& estimate) {
  if (!(estimate.r > 0.0)) throw std::invalid_argument("estimate radius must be positive");
  const Point2 e = to_local(m, estimate.center);
  return coeffs_local(m, e.x, e.y, estimate.r);
}

DProxy d_proxy(const FitCoeffs& c, double re) {
  if (!(re > 0.0)) throw std::invalid_argument("estimate radius must be positive");
  const double re2 = re * re;
  const double re4 = re2 * re2;
  DProxy d;
  d.xx = -2.0 * (c.v - c.vxx * re2) * re2;
  d.xy = c.vxy * re4;
  d.yy = -2.0 * (c.v - c.vyy * re2) * re2;
  d.xr = (-c.vx + c.vxr * re2) * re2;
  d.yr = (-c.vy + c.vyr * re2) * re2;
  d.rr = 2.0 * (c.v - c.vr * re2 + re4);
  return d;
}

QuadRatio line_ratio(const FitCoeffs& c, double re, const Vec3& dir) {
  const auto [ax, ay, ar] = dir;
  QuadRatio q;
  q.a = {c.v, c.vx * ax + c.vy * ay + c.vr * ar,
         c.vxx * ax * ax + c.vyy * ay * ay + ar * ar + c.vxy * ax * ay + c.vxr * ax * ar + c.vyr * ay * ar};
  q.b = {4.0 * re * re, 4.0 * ar, 4.0 * (ax * ax + ay * ay)};
  return q;
}

double objective(const NormalizedMoments& m, const Circle& c) {
  if (!(c.r > 0.0)) throw std::invalid_argument("circle radius must be positive");
  return objective_local(m, {to_local(m, c.center), c.r});
}

double penalty(const NormalizedMoments& m, const Circle& c) { return m.weight * objective(m, c); }

FreeFit free_fit_detailed(const NormalizedMoments& m, int sweeps, double tol) {
  FreeFit out;
  out.start = kasa_fit(m);
  const Circle local_start{to_local(m, out.start.center), out.start.r};
  const FreeObjective obj(m, local_start);
  out.search = minimize<3>(obj, Vec3{0.0, 0.0, 0.0}, sweeps, tol);
  for (const Vec3& x : out.search.trajectory) {
    Circle c;
    obj.at(x, c);
    out.path.push_back({to_world(m, c.center), c.r});
  }
  out.circle = out.path.back();
  return out;
}

Circle free_fit(const NormalizedMoments& m, int sweeps) { return free_fit_detailed(m, sweeps).circle; }

AnchoredQuadForms one_point_matrices(const NormalizedMoments& m, Point2 anchor) {
  if (!(m.weight > 0.0)) throw std::invalid_argument("empty moments");
  return quad_forms_local(m, to_local(m, anchor));
}

std::array<double, 3> pencil_polynomial(const AnchoredQuadForms& f) {
  return {determinant(f.a), -trace_product(adjugate(f.a), f.b), trace_product(f.a, adjugate(f.b))};
}

PencilSolution solve_pencil(const AnchoredQuadForms& f) {
  const Point2 a = f.anchor - f.origin;
  // h = T g with g = (u, w, s): u, w are the center offset from the anchor
  // scaled by s, and g'(T'BT)g = u^2 + w^2.
  const Mat3 t{{{1.0, 0.0, a.x}, {0.0, 1.0, a.y}, {0.0, 0.0, 1.0}}};
  const Mat3 at = transpose(t) * f.a * t;
  const double alpha = at[2][2];
  const double scale2 = 0.25 * (at[0][0] + at[1][1]);  // mean squared distance to the anchor
  if (!(alpha > 0.0) || !(scale2 > 0.0))
    throw FitError(FitErrorKind::DegeneratePencil, "all data coincide with the anchor");

  const Vec2 q{at[0][2], at[1][2]};
  const Mat2 schur{{{at[0][0] - q[0] * q[0] / alpha, at[0][1] - q[0] * q[1] / alpha},
                    {at[1][0] - q[1] * q[0] / alpha, at[1][1] - q[1] * q[1] / alpha}}};
  const SymEigen<2> eig = eigen_sym<2>(schur);
  const Vec2 e = eig.vector(0);
  const double s = -(q[0] * e[0] + q[1] * e[1]) / alpha;
  // |e| = 1, so the radius is 1 / |s|.
  if (!(std::abs(s) * kMaxRadiusRatio * std::sqrt(scale2) > 1.0))
    throw FitError(FitErrorKind::DegeneratePencil, "best direction has an unbounded radius");

  PencilSolution out;
  out.lambda = std::max(eig.values[0], 0.0);
  out.h = t * Vec3{e[0], e[1], s};
  return out;
}

Circle one_point_fit(const NormalizedMoments& m, Point2 anchor) {
  const AnchoredQuadForms forms = one_point_matrices(m, anchor);
  try {
    const PencilSolution sol = solve_pencil(forms);
    const Point2 center = to_world(m, {sol.h[0] / sol.h[2], sol.h[1] / sol.h[2]});
    return {center, distance(center, anchor)};
  } catch (const FitError& pencil_error) {
    Circle start;
    try {
      start = kasa_fit(m);
    } catch (const FitError&) {
      throw pencil_error;
    }
    start.r = distance(start.center, anchor);
    if (!is_valid(start)) throw pencil_error;
    const Circle refined = refine_one_point(m, anchor, start);
    if (!is_valid(refined)) throw pencil_error;
    return refined;
  }
}

Circle refine_one_point(const NormalizedMoments& m, Point2 anchor, const Circle& start, int sweeps, double tol) {
  const double d = distance(start.center, anchor);
  if (!is_valid(start) || std::abs(d - start.r) > 1e-9 * start.r)
    throw std::invalid_argument("refine_one_point: start circle must pass through the anchor");
  const Point2 a = to_local(m, anchor);
  const Point2 c0 = to_local(m, start.center);
  const AnchoredObjective obj(m, a, c0);
  const SearchResult<2> res = minimize<2>(obj, Vec2{0.0, 0.0}, sweeps, tol);
  const Point2 center = to_world(m, {c0.x + res.x[0], c0.y + res.x[1]});
  return {center, distance(center, anchor)};
}

TwoPointRatio two_point_ratio(const NormalizedMoments& m, Point2 p1, Point2 p2) {
  if (!is_finite(p1) || !is_finite(p2)) throw std::invalid_argument("anchors must be finite");
  if (p1 == p2) throw std::invalid_argument("two-point fit needs distinct anchors");
  if (!(m.weight > 0.0)) throw std::invalid_argument("empty moments");
  const Point2 chord = p2 - p1;
  const double length = norm(chord);
  const Point2 u = (1.0 / length) * chord;

  TwoPointRatio out;
  out.line.point = 0.5 * (p1 + p2);
  out.line.dir = {-u.y, u.x};

  const Mat3 a = quad_forms_local(m, to_local(m, p1)).a;
  const Point2 mid = to_local(m, out.line.point);
  const Vec3 h0{mid.x, mid.y, 1.0};
  const Vec3 n{out.line.dir.x, out.line.dir.y, 0.0};
  out.ratio.a = {quad_form(a, h0), 2.0 * dot(h0, a * n), quad_form(a, n)};
  // 4 |c(t) - p1|^2 = 4 (L^2 / 4 + t^2)
  out.ratio.b = {length * length, 0.0, 4.0};
  return out;
}

TwoPointFit two_point_fit_detailed(const NormalizedMoments& m, Point2 p1, Point2 p2) {
  const TwoPointRatio tp = two_point_ratio(m, p1, p2);
  const double length = distance(p1, p2);
  // Solve in tau = t / L so every coefficient carries the same units.
  QuadRatio scaled;
  scaled.a = {tp.ratio.a[0] / (length * length), tp.ratio.a[1] / length, tp.ratio.a[2]};
  scaled.b = {1.0, 0.0, 4.0};
  const RatioMin best = minimize_ratio(scaled);
  if (!best || std::abs(best->x) > kMaxRadiusRatio)
    throw FitError(FitErrorKind::NoArcExists, "objective decreases towards a straight line");

  TwoPointFit out;
  out.t = best->x * length;
  out.value = best->value;
  const Point2 center = tp.line.center_at(out.t);
  out.circle = {center, distance(center, p1)};
  return out;
}

Circle two_point_fit(const NormalizedMoments& m, Point2 p1, Point2 p2) {
  return two_point_fit_detailed(m, p1, p2).circle;
}

NormalizedMoments fitting_moments(const MomentAccumulator& acc, const FitOptions& options) {
  return options.center_on_centroid ? centered(acc) : normalized(acc);
}

Circle kasa_fit(const MomentAccumulator& acc, const FitOptions& options) {
  return kasa_fit(fitting_moments(acc, options));
}

Circle free_fit(const MomentAccumulator& acc, int sweeps, const FitOptions& options) {
  return free_fit(fitting_moments(acc, options), sweeps);
}

Circle one_point_fit(const MomentAccumulator& acc, Point2 anchor, const FitOptions& options) {
  return one_point_fit(fitting_moments(acc, options), anchor);
}

Circle two_point_fit(const MomentAccumulator& acc, Point2 p1, Point2 p2, const FitOptions& options) {
  return two_point_fit(fitting_moments(acc, options), p1, p2);
}

}  // namespace arcfit
