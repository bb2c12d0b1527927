#pragma once

#include <span>

#include "arcfit/errors.hpp"
#include "arcfit/geometry.hpp"

// Per-point reference computations. Everything here touches every point, so
// it is used for validation and as a test oracle rather than for fitting.

namespace arcfit {

/// sum ((|p - c|^2 - r^2)^2), the algebraic residual.
double exact_objective_sq(std::span<const Point2> points, const Circle& c);
/// sum ((|p - c| - r)^2), the true squared radial deviations.
double exact_sse(std::span<const Point2> points, const Circle& c);

struct GeometricFitOptions {
  int max_iterations = 200;
  double rel_tol = 1e-12;
};

/// Gauss-Newton minimization of exact_sse from `start`, halving steps that do
/// not reduce the residual. Throws FitError(NonConvergence) when the
/// iteration budget runs out and std::invalid_argument for fewer than three
/// points.
Circle geometric_fit(std::span<const Point2> points, const Circle& start, const GeometricFitOptions& options = {});

/// Oriented arc from `start` to `end` on `circle`.
struct Arc {
  Circle circle;
  Point2 start;
  Point2 end;
  double theta_start = 0.0;  // angle of `start` seen from the center
  double sweep = 0.0;        // signed span, positive counter-clockwise, 0 < |sweep| < 2 pi
};

/// Arc between two points on `circle` going through the side that contains
/// `via`. Throws std::invalid_argument when the endpoints coincide or are not
/// on the circle (1e-9 r).
Arc make_arc(const Circle& circle, Point2 start, Point2 end, Point2 via);

/// Angle of `p` measured from the arc start along its orientation, in [0, 2 pi).
double arc_parameter(const Arc& arc, Point2 p);

/// Radial distance when p projects inside the span, otherwise the distance
/// to the nearer endpoint.
double arc_deviation(Point2 p, const Arc& arc);

struct DeviationReport {
  double max_dev = 0.0;
  double sum_sq = 0.0;
  bool monotone = true;
  bool passes = true;
};

/// Validates the interior points (excluding the endpoints that define the
/// arc) against `tol` (inclusive). Zigzag rule: arc parameters of the start,
/// every interior point and the end must be strictly increasing.
DeviationReport check_tolerance_zigzag(std::span<const Point2> interior, const Arc& arc, double tol);
/// Same verdict, stopping at the first offending point. `reads` (if given)
/// receives the number of points examined.
bool passes_tolerance_zigzag(std::span<const Point2> interior, const Arc& arc, double tol,
                             std::size_t* reads = nullptr);

}  // namespace arcfit
