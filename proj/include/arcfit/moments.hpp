#pragma once

#include <array>
#include <span>

#include "arcfit/detail/dd.hpp"
#include "arcfit/geometry.hpp"

namespace arcfit {

/// Highest total order g + h of the bivariate power sums.
inline constexpr int kMomentOrder = 4;
/// Number of (g, h) pairs with g + h <= 4.
inline constexpr int kMomentCount = 15;

/// Slot of x^g y^h in the packed moment arrays, grouped by total order.
constexpr int moment_index(int g, int h) {
  const int k = g + h;
  return k * (k + 1) / 2 + h;
}

/// Mergeable weighted power sums S_{g,h} = sum w x^g y^h for g + h <= 4.
///
/// Sums are kept in double-double precision relative to a reference origin
/// (the first sample added, unless one is given). Keeping a local origin is
/// what lets data sitting far from (0, 0) keep its fourth-order information.
/// All accessors named `sum` report values about the absolute origin.
class MomentAccumulator {
 public:
  MomentAccumulator() = default;
  /// Empty accumulator whose sums will be taken about `origin`.
  explicit MomentAccumulator(Point2 origin);

  /// Adds w * x^g y^h. Requires w > 0 and finite coordinates.
  void add_point(Point2 p, double w = 1.0);
  /// Adds the arc-length line integral of x^g y^h over the segment; the
  /// weight grows by its length. Rejects zero-length segments.
  void add_segment(Point2 p0, Point2 p1);

  MomentAccumulator& operator+=(const MomentAccumulator& other);

  /// No weight accumulated (an explicit origin may still be set).
  bool empty() const { return !(weight_.hi > 0.0); }
  bool has_origin() const { return has_origin_; }
  double weight() const { return detail::to_double(weight_); }
  Point2 origin() const { return origin_; }

  /// S_{g,h} about the absolute origin.
  double sum(int g, int h) const;
  /// S_{g,h} about origin().
  double local_sum(int g, int h) const { return detail::to_double(sums_[moment_index(g, h)]); }
  /// Weighted mean point. Requires a non-empty accumulator.
  Point2 centroid() const;

  /// Same point set, with sums re-expanded about `new_origin`.
  MomentAccumulator rebased(Point2 new_origin) const;
  /// Accumulator of the point set moved by (dx, dy).
  MomentAccumulator translated(double dx, double dy) const;
  /// Componentwise this - other; `other` must be a sub-collection of this
  /// (prefix-sum range queries).
  MomentAccumulator minus(const MomentAccumulator& other) const;

  const std::array<detail::Dd, kMomentCount>& raw_sums() const { return sums_; }

 private:
  void ensure_origin(Point2 p);

  bool has_origin_ = false;
  Point2 origin_{};
  std::array<detail::Dd, kMomentCount> sums_{};
  detail::Dd weight_{};
};

MomentAccumulator accumulate_point(MomentAccumulator acc, Point2 p, double w = 1.0);
MomentAccumulator accumulate_segment(MomentAccumulator acc, Point2 p0, Point2 p1);
MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b);
MomentAccumulator translate(const MomentAccumulator& acc, double dx, double dy);

/// Serial reference kernel: unit-weight accumulation of a point set.
MomentAccumulator accumulate_points(std::span<const Point2> points);
/// OpenMP kernel: per-thread shards sharing the first point as origin,
/// merged in thread order.
MomentAccumulator accumulate_points_parallel(std::span<const Point2> points);

/// Weighted means M_{g,h} = S_{g,h} / W about `origin`.
struct NormalizedMoments {
  Point2 origin{};
  std::array<double, kMomentCount> m{};
  double weight = 0.0;

  double operator()(int g, int h) const { return m[moment_index(g, h)]; }
};

/// Means about the absolute origin. Throws std::invalid_argument when empty.
NormalizedMoments normalized(const MomentAccumulator& acc);
/// Means about an arbitrary origin (exact re-expansion in double-double first).
NormalizedMoments normalized_about(const MomentAccumulator& acc, Point2 origin);
/// Means about the centroid; the well-conditioned frame for fitting.
NormalizedMoments centered(const MomentAccumulator& acc);

/// Re-expands already normalized moments about another origin (double precision).
NormalizedMoments recentered(const NormalizedMoments& m, Point2 origin);

}  // namespace arcfit
