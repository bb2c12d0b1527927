#include "arcfit/quadratio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arcfit {

namespace {

constexpr double kAdmissibleTol = 1e-9;
constexpr double kDenominatorTol = 1e-12;

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

DerivativeNumerator derivative_numerator(const QuadRatio& q) {
  const auto& [a0, a1, a2] = q.a;
  const auto& [b0, b1, b2] = q.b;
  return {a1 * b0 - a0 * b1, 2.0 * (a2 * b0 - a0 * b2), a2 * b1 - a1 * b2};
}

QuadRatio admissible(const QuadRatio& q) {
  for (double v : q.a)
    if (!std::isfinite(v)) throw std::invalid_argument("ratio coefficients must be finite");
  for (double v : q.b)
    if (!std::isfinite(v)) throw std::invalid_argument("ratio coefficients must be finite");

  const double scale = std::max({std::abs(q.a[0]), std::abs(q.a[1]), std::abs(q.a[2])});
  const double bscale = std::max({std::abs(q.b[0]), std::abs(q.b[1]), std::abs(q.b[2])});
  if (scale == 0.0 && bscale == 0.0) throw std::invalid_argument("ratio with both polynomials identically zero");

  QuadRatio out = q;
  const double tol = kAdmissibleTol * scale;
  if (out.a[2] < -tol || out.a[0] < -tol) throw std::invalid_argument("ratio numerator is negative somewhere");
  out.a[2] = std::max(out.a[2], 0.0);
  out.a[0] = std::max(out.a[0], 0.0);
  const double disc = out.a[1] * out.a[1] - 4.0 * out.a[0] * out.a[2];
  if (disc > kAdmissibleTol * scale * scale) throw std::invalid_argument("ratio numerator is negative somewhere");
  if (out.a[2] == 0.0) out.a[1] = 0.0;  // |a1| is round-off here by the check above
  return out;
}

RatioMin minimize_ratio(const QuadRatio& raw) {
  const QuadRatio q = admissible(raw);
  const auto [c0, c1, c2] = derivative_numerator(q);
  const double d = c1 * c1 - 4.0 * c0 * c2;

  double x = 0.0;
  if (c2 == 0.0) {
    if (!(c1 > 0.0)) return std::nullopt;
    x = -c0 / c1;
  } else {
    if (!(d > 0.0)) return std::nullopt;
    const double sd = std::sqrt(d);
    if (c1 < 0.0) {
      x = (sd - c1) / (2.0 * c2);
    } else if (c1 > 0.0) {
      x = -2.0 * c0 / (sd + c1);
    } else {
      x = sign(c2) * std::sqrt(-c0 / c2);
    }
  }
  if (!std::isfinite(x)) return std::nullopt;

  const double den = q.denominator(x);
  const double den_scale = std::abs(q.b[0]) + std::abs(q.b[1] * x) + std::abs(q.b[2] * x * x);
  if (!(den > kDenominatorTol * den_scale)) return std::nullopt;

  return RatioMinimum{x, std::max(q.numerator(x), 0.0) / den};
}

}  // namespace arcfit
