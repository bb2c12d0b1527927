#pragma once

#include <array>
#include <optional>

namespace arcfit {

/// (a0 + a1 x + a2 x^2) / (b0 + b1 x + b2 x^2) with a nonnegative numerator.
struct QuadRatio {
  std::array<double, 3> a{};
  std::array<double, 3> b{};

  double numerator(double x) const { return a[0] + x * (a[1] + x * a[2]); }
  double denominator(double x) const { return b[0] + x * (b[1] + x * b[2]); }
  double operator()(double x) const { return numerator(x) / denominator(x); }
};

/// Numerator c0 + c1 x + c2 x^2 of the ratio's derivative.
struct DerivativeNumerator {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double discriminant() const { return c1 * c1 - 4.0 * c0 * c2; }
};

struct RatioMinimum {
  double x = 0.0;
  double value = 0.0;
};

/// Either the global minimum over {denominator > 0} or nothing.
using RatioMin = std::optional<RatioMinimum>;

DerivativeNumerator derivative_numerator(const QuadRatio& q);

/// Validates the nonnegative-numerator requirement and returns the ratio with
/// round-off sized violations clamped away. Throws std::invalid_argument when
/// the numerator is genuinely negative somewhere or both polynomials vanish.
QuadRatio admissible(const QuadRatio& q);

/// Global minimizer of the ratio over the region where the denominator is
/// positive. Closed form: roots of the derivative numerator, taking the
/// cancellation-free root expression for each sign of c1. Returns nullopt
/// when the infimum is not attained (asymptote, constant ratio, linear
/// degeneracy, or the candidate falls where the denominator is not
/// positive).
RatioMin minimize_ratio(const QuadRatio& q);

}  // namespace arcfit
