#include "arcfit/moments.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace arcfit {

using detail::Dd;

namespace {

constexpr std::array<std::array<double, 5>, 5> kBinomial{{
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
}};

std::array<Dd, 5> dd_powers(double v) {
  std::array<Dd, 5> p;
  p[0] = detail::dd(1.0);
  p[1] = detail::dd(v);
  p[2] = detail::two_prod(v, v);
  p[3] = p[2] * v;
  p[4] = p[2] * p[2];
  return p;
}

std::array<Dd, 5> dd_powers(Dd v) {
  std::array<Dd, 5> p;
  p[0] = detail::dd(1.0);
  p[1] = v;
  p[2] = v * v;
  p[3] = p[2] * v;
  p[4] = p[2] * p[2];
  return p;
}

// Coefficients of (a + b t)^k as a polynomial in t.
std::array<double, 5> binomial_poly(double a, double b, int k) {
  std::array<double, 5> c{};
  for (int i = 0; i <= k; ++i) c[i] = kBinomial[k][i] * std::pow(a, k - i) * std::pow(b, i);
  return c;
}

void require_finite(Point2 p) {
  if (!is_finite(p)) throw std::invalid_argument("moment input coordinates must be finite");
}

}  // namespace

MomentAccumulator::MomentAccumulator(Point2 origin) : has_origin_(true), origin_(origin) {
  require_finite(origin);
}

void MomentAccumulator::ensure_origin(Point2 p) {
  if (!has_origin_) {
    origin_ = p;
    has_origin_ = true;
  }
}

void MomentAccumulator::add_point(Point2 p, double w) {
  require_finite(p);
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("point weight must be positive and finite");
  ensure_origin(p);
  const auto px = dd_powers(p.x - origin_.x);
  const auto py = dd_powers(p.y - origin_.y);
  for (int k = 0; k <= kMomentOrder; ++k) {
    for (int h = 0; h <= k; ++h) {
      const int g = k - h;
      Dd term = (h == 0) ? px[g] : (g == 0) ? py[h] : px[g] * py[h];
      if (w != 1.0) term = term * w;
      sums_[moment_index(g, h)] += term;
    }
  }
  weight_ += detail::dd(w);
}

void MomentAccumulator::add_segment(Point2 p0, Point2 p1) {
  require_finite(p0);
  require_finite(p1);
  const Point2 d = p1 - p0;
  const double length = norm(d);
  if (!(length > 0.0)) throw std::invalid_argument("zero-length segment");
  ensure_origin(p0);
  const Point2 u = p0 - origin_;
  for (int k = 0; k <= kMomentOrder; ++k) {
    for (int h = 0; h <= k; ++h) {
      const int g = k - h;
      const auto cx = binomial_poly(u.x, d.x, g);
      const auto cy = binomial_poly(u.y, d.y, h);
      // integral over t in [0, 1] of the product polynomial
      double integral = 0.0;
      for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= h; ++j) integral += cx[i] * cy[j] / static_cast<double>(i + j + 1);
      sums_[moment_index(g, h)] += detail::two_prod(integral, length);
    }
  }
  weight_ += detail::dd(length);
}

MomentAccumulator& MomentAccumulator::operator+=(const MomentAccumulator& other) {
  if (!other.has_origin_ || other.empty()) return *this;
  if (!has_origin_) {
    *this = other;
    return *this;
  }
  const MomentAccumulator& b = (other.origin_ == origin_) ? other : other.rebased(origin_);
  // `b` may alias a temporary; copy sums before touching our own state.
  const auto bs = b.sums_;
  const Dd bw = b.weight_;
  for (int i = 0; i < kMomentCount; ++i) sums_[i] += bs[i];
  weight_ += bw;
  return *this;
}

double MomentAccumulator::sum(int g, int h) const {
  if (!has_origin_) return 0.0;
  if (origin_ == Point2{}) return local_sum(g, h);
  return rebased(Point2{}).local_sum(g, h);
}

Point2 MomentAccumulator::centroid() const {
  const double w = weight();
  if (!(w > 0.0)) throw std::invalid_argument("centroid of an empty accumulator");
  return {origin_.x + local_sum(1, 0) / w, origin_.y + local_sum(0, 1) / w};
}

MomentAccumulator MomentAccumulator::rebased(Point2 new_origin) const {
  require_finite(new_origin);
  MomentAccumulator out(new_origin);
  if (!has_origin_) return out;
  out.weight_ = weight_;
  // (x - new) = (x - old) + (old - new); the offset is formed exactly.
  const auto dxp = dd_powers(detail::two_sum(origin_.x, -new_origin.x));
  const auto dyp = dd_powers(detail::two_sum(origin_.y, -new_origin.y));
  for (int k = 0; k <= kMomentOrder; ++k) {
    for (int h = 0; h <= k; ++h) {
      const int g = k - h;
      Dd acc{};
      for (int a = 0; a <= g; ++a) {
        for (int b = 0; b <= h; ++b) {
          const double c = kBinomial[g][a] * kBinomial[h][b];
          acc += sums_[moment_index(a, b)] * (dxp[g - a] * dyp[h - b]) * c;
        }
      }
      out.sums_[moment_index(g, h)] = acc;
    }
  }
  return out;
}

MomentAccumulator MomentAccumulator::translated(double dx, double dy) const {
  if (!std::isfinite(dx) || !std::isfinite(dy)) throw std::invalid_argument("translation must be finite");
  MomentAccumulator out = *this;
  if (has_origin_) out.origin_ = {origin_.x + dx, origin_.y + dy};
  return out;
}

MomentAccumulator MomentAccumulator::minus(const MomentAccumulator& other) const {
  if (!other.has_origin_) return *this;
  MomentAccumulator out = has_origin_ ? *this : MomentAccumulator(other.origin_);
  const MomentAccumulator b = (other.origin_ == out.origin_) ? other : other.rebased(out.origin_);
  for (int i = 0; i < kMomentCount; ++i) out.sums_[i] = out.sums_[i] - b.sums_[i];
  out.weight_ = out.weight_ - b.weight_;
  return out;
}

MomentAccumulator accumulate_point(MomentAccumulator acc, Point2 p, double w) {
  acc.add_point(p, w);
  return acc;
}

MomentAccumulator accumulate_segment(MomentAccumulator acc, Point2 p0, Point2 p1) {
  acc.add_segment(p0, p1);
  return acc;
}

MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b) {
  MomentAccumulator out = a;
  out += b;
  return out;
}

MomentAccumulator translate(const MomentAccumulator& acc, double dx, double dy) {
  return acc.translated(dx, dy);
}

MomentAccumulator accumulate_points(std::span<const Point2> points) {
  if (points.empty()) return {};
  MomentAccumulator acc(points.front());
  for (const Point2& p : points) acc.add_point(p);
  return acc;
}

MomentAccumulator accumulate_points_parallel(std::span<const Point2> points) {
  if (points.empty()) return {};
  const Point2 origin = points.front();
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  std::vector<MomentAccumulator> shards(static_cast<std::size_t>(omp_get_max_threads()),
                                        MomentAccumulator(origin));
#pragma omp parallel
  {
    MomentAccumulator& shard = shards[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) shard.add_point(points[static_cast<std::size_t>(i)]);
  }
  MomentAccumulator total(origin);
  for (const auto& s : shards) total += s;
  return total;
}

NormalizedMoments normalized_about(const MomentAccumulator& acc, Point2 origin) {
  const double w = acc.weight();
  if (acc.empty()) throw std::invalid_argument("cannot normalize an empty accumulator");
  const MomentAccumulator local = (acc.origin() == origin) ? acc : acc.rebased(origin);
  NormalizedMoments out;
  out.origin = origin;
  out.weight = w;
  for (int i = 0; i < kMomentCount; ++i) out.m[i] = detail::to_double(local.raw_sums()[i]) / w;
  return out;
}

NormalizedMoments normalized(const MomentAccumulator& acc) { return normalized_about(acc, Point2{}); }

NormalizedMoments centered(const MomentAccumulator& acc) {
  if (acc.empty()) throw std::invalid_argument("cannot normalize an empty accumulator");
  return normalized_about(acc, acc.centroid());
}

NormalizedMoments recentered(const NormalizedMoments& m, Point2 origin) {
  NormalizedMoments out;
  out.origin = origin;
  out.weight = m.weight;
  const double dx = m.origin.x - origin.x;
  const double dy = m.origin.y - origin.y;
  std::array<double, 5> px{1, dx, dx * dx, dx * dx * dx, dx * dx * dx * dx};
  std::array<double, 5> py{1, dy, dy * dy, dy * dy * dy, dy * dy * dy * dy};
  for (int k = 0; k <= kMomentOrder; ++k) {
    for (int h = 0; h <= k; ++h) {
      const int g = k - h;
      double s = 0.0;
      for (int a = 0; a <= g; ++a)
        for (int b = 0; b <= h; ++b) s += kBinomial[g][a] * kBinomial[h][b] * px[g - a] * py[h - b] * m(a, b);
      out.m[moment_index(g, h)] = s;
    }
  }
  return out;
}

}  // namespace arcfit
