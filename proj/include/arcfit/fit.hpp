#pragma once

#include <vector>

#include "arcfit/dirsearch.hpp"
#include "arcfit/errors.hpp"
#include "arcfit/geometry.hpp"
#include "arcfit/moments.hpp"
#include "arcfit/quadratio.hpp"

// Moment-based circle fitting with O(1) cost per fit.
//
// The minimized quantity is the algebraic residual sum divided by 4 r^2,
//
//   f(c, r) = mean_i ((|p_i - c|^2 - r^2)^2) / (4 r^2),
//
// which approximates the mean squared radial distance and, unlike it, can be
// written in terms of the moments M_{g,h} (g + h <= 4) alone. Every function
// here takes NormalizedMoments (in whatever frame they were normalized) and
// works with absolute coordinates on its public surface; the frame is only an
// internal detail. Fitting about the centroid keeps the fourth-order terms
// well conditioned; the MomentAccumulator overloads at the bottom do that by
// default.

namespace arcfit {

/// Step (dx, dy, dr) from an estimate: the center moves by (dx, dy) and the
/// squared radius grows by dx^2 + dy^2 + dr. In this parametrization the
/// objective's numerator is quadratic.
struct Delta {
  double dx = 0.0;
  double dy = 0.0;
  double dr = 0.0;
};

/// Applies a step to an estimate. Throws std::invalid_argument when the
/// resulting squared radius is not positive.
Circle apply(const Circle& estimate, const Delta& step);

/// Numerator coefficients of the objective around an estimate (xe, ye, re):
///
///   f(d) = (v + vx dx + vy dy + vr dr + vxx dx^2 + vyy dy^2 + dr^2
///           + vxy dx dy + vxr dx dr + vyr dy dr) / (4 (re^2 + dx^2 + dy^2 + dr))
///
/// The v-coefficients are translation invariant; z, zx, zy are expressed in
/// the moments' frame.
struct FitCoeffs {
  double v = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double vr = 0.0;
  double vxx = 0.0;
  double vyy = 0.0;
  double vxy = 0.0;
  double vxr = 0.0;
  double vyr = 0.0;
  double z = 0.0;   // xe^2 + ye^2 - re^2
  double zx = 0.0;  // 3 xe^2 + ye^2 - re^2
  double zy = 0.0;  // xe^2 + 3 ye^2 - re^2

  double numerator(const Delta& d) const;
};

/// The objective at `estimate + step`, from the coefficients alone.
double ratio_at(const FitCoeffs& c, double re, const Delta& step);

/// Symmetric matrix proportional (factor 4 re^6) to the objective's Hessian
/// in (dx, dy, dr) at the estimate.
struct DProxy {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
  double xr = 0.0;
  double yr = 0.0;
  double rr = 0.0;

  Mat3 matrix() const { return {{{xx, xy, xr}, {xy, yy, yr}, {xr, yr, rr}}}; }
};

/// Quadratic forms of the fit constrained through one anchor point: for
/// h = (xc s, yc s, s), f = (h'Ah) / (4 h'Bh). Both matrices are expressed in
/// the frame whose origin is `origin` (the moments' frame).
struct AnchoredQuadForms {
  Mat3 a{};
  Mat3 b{};
  Point2 anchor{};
  Point2 origin{};
};

/// Stationary value and homogeneous vector of the A - lambda B pencil; h is
/// in the quad forms' frame.
struct PencilSolution {
  double lambda = 0.0;
  Vec3 h{};
};

/// Perpendicular bisector of two anchors: centers point + t * dir, |dir| = 1,
/// dir being the chord direction rotated +90 degrees.
struct ChordLine {
  Point2 point{};
  Point2 dir{};

  Point2 center_at(double t) const { return point + t * dir; }
};

struct TwoPointRatio {
  QuadRatio ratio;  // objective as a function of the line parameter t
  ChordLine line;
};

struct TwoPointFit {
  Circle circle;
  double t = 0.0;
  double value = 0.0;  // objective per unit weight
};

struct FreeFit {
  Circle circle;
  Circle start;              // algebraic (Kasa) starting circle
  SearchResult<3> search;    // in the (dx, dy, dr) frame of the start
  std::vector<Circle> path;  // circle after each sweep, path[0] = start
};

/// Algebraic fit minimizing mean((|p - c|^2 - r^2)^2) through the centered
/// 2x2 normal system. Throws FitError(CollinearOrDegenerate) when that
/// system's condition number exceeds 1e12.
Circle kasa_fit(const NormalizedMoments& m);

FitCoeffs fit_coeffs(const NormalizedMoments& m, const Circle& estimate);
DProxy d_proxy(const FitCoeffs& c, double re);
/// Restriction of the objective to the line t * dir in (dx, dy, dr).
QuadRatio line_ratio(const FitCoeffs& c, double re, const Vec3& dir);

/// Objective per unit weight, v / (4 r^2).
double objective(const NormalizedMoments& m, const Circle& c);
/// Approximate sum of squared radial deviations, W v / (4 r^2).
double penalty(const NormalizedMoments& m, const Circle& c);

/// Unconstrained fit: eigen-direction search starting from the Kasa circle.
/// One sweep already gives a good approximation; about 20 sweeps with a tiny
/// tolerance converge to machine precision.
FreeFit free_fit_detailed(const NormalizedMoments& m, int sweeps = 1, double tol = 0.0);
Circle free_fit(const NormalizedMoments& m, int sweeps = 1);

AnchoredQuadForms one_point_matrices(const NormalizedMoments& m, Point2 anchor);
/// Smallest stationary value of h'Ah / h'Bh with a finite center. The
/// singular direction of B is deflated analytically, leaving a 2x2
/// symmetric eigenproblem. Throws FitError(DegeneratePencil) when the best
/// direction corresponds to an infinite radius or all data sit on the anchor.
PencilSolution solve_pencil(const AnchoredQuadForms& forms);
/// det(A - lambda B) as coefficients {p0, p1, p2}; the cubic term vanishes
/// because B is singular.
std::array<double, 3> pencil_polynomial(const AnchoredQuadForms& forms);

/// Best circle through `anchor`. Falls back to refine_one_point from the
/// Kasa center when the pencil is degenerate.
Circle one_point_fit(const NormalizedMoments& m, Point2 anchor);
/// Two-dimensional eigen-direction search over the center, the radius being
/// tied to the anchor. `start` must pass through the anchor.
Circle refine_one_point(const NormalizedMoments& m, Point2 anchor, const Circle& start, int sweeps = 20,
                        double tol = 1e-14);

TwoPointRatio two_point_ratio(const NormalizedMoments& m, Point2 p1, Point2 p2);
/// Best circle through both anchors, closed form. Throws
/// FitError(NoArcExists) when the objective keeps decreasing towards a
/// straight line (or the optimum radius exceeds 1e8 chord lengths).
TwoPointFit two_point_fit_detailed(const NormalizedMoments& m, Point2 p1, Point2 p2);
Circle two_point_fit(const NormalizedMoments& m, Point2 p1, Point2 p2);

struct FitOptions {
  /// Re-expand the moments about the data centroid before fitting.
  bool center_on_centroid = true;
};

/// Frame used by the accumulator overloads.
NormalizedMoments fitting_moments(const MomentAccumulator& acc, const FitOptions& options = {});

Circle kasa_fit(const MomentAccumulator& acc, const FitOptions& options = {});
Circle free_fit(const MomentAccumulator& acc, int sweeps = 1, const FitOptions& options = {});
Circle one_point_fit(const MomentAccumulator& acc, Point2 anchor, const FitOptions& options = {});
Circle two_point_fit(const MomentAccumulator& acc, Point2 p1, Point2 p2, const FitOptions& options = {});

}  // namespace arcfit
