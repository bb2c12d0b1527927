#pragma once

// Double-double arithmetic (an unevaluated sum hi + lo with |lo| <= ulp(hi)/2).
// Used for the moment power sums so that prefix differencing and origin
// changes keep roughly 106 bits. Requires strict IEEE evaluation: no fused
// contractions, no reassociation.

namespace arcfit::detail {

struct Dd {
  double hi = 0.0;
  double lo = 0.0;

  friend constexpr bool operator==(const Dd&, const Dd&) = default;
};

inline Dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline Dd quick_two_sum(double a, double b) {
  const double s = a + b;
  const double e = b - (s - a);
  return {s, e};
}

// Veltkamp split; exact for |a| < 2^996.
inline void split(double a, double& hi, double& lo) {
  constexpr double kSplitter = 134217729.0;  // 2^27 + 1
  const double t = kSplitter * a;
  hi = t - (t - a);
  lo = a - hi;
}

// Dekker's exact product.
inline Dd two_prod(double a, double b) {
  const double p = a * b;
  double ah, al, bh, bl;
  split(a, ah, al);
  split(b, bh, bl);
  const double e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
  return {p, e};
}

inline Dd operator+(Dd a, Dd b) {
  Dd s = two_sum(a.hi, b.hi);
  const Dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline Dd operator-(Dd a) { return {-a.hi, -a.lo}; }
inline Dd operator-(Dd a, Dd b) { return a + (-b); }

inline Dd operator*(Dd a, Dd b) {
  Dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline Dd operator*(Dd a, double b) {
  Dd p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline Dd& operator+=(Dd& a, Dd b) { return a = a + b; }

inline double to_double(Dd a) { return a.hi + a.lo; }

inline Dd dd(double a) { return {a, 0.0}; }

}  // namespace arcfit::detail
