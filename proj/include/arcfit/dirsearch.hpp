#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "arcfit/geometry.hpp"
#include "arcfit/quadratio.hpp"

namespace arcfit {

template <std::size_t N>
struct SymEigen {
  Vec<N> values{};   // ascending
  Mat<N> vectors{};  // column k is the unit eigenvector for values[k]
  int sweeps = 0;    // Jacobi sweeps performed

  Vec<N> vector(std::size_t k) const {
    Vec<N> v{};
    for (std::size_t i = 0; i < N; ++i) v[i] = vectors[i][k];
    return v;
  }
};

/// Cyclic Jacobi eigen-decomposition of a small symmetric matrix.
/// Stops when the off-diagonal mass drops below 1e-14 * ||M|| or after 15
/// sweeps.
template <std::size_t N>
SymEigen<N> eigen_sym(const Mat<N>& m) {
  for (const auto& row : m)
    for (double x : row)
      if (!std::isfinite(x)) throw std::invalid_argument("eigen_sym: non-finite entry");

  Mat<N> a = m;
  // Symmetrize exactly; callers pass matrices symmetric up to round-off.
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) a[i][j] = a[j][i] = 0.5 * (a[i][j] + a[j][i]);

  SymEigen<N> out;
  Mat<N> v = identity<N>();
  const double threshold = 1e-14 * frobenius(a);

  auto off_diagonal = [&a] {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) s += a[i][j] * a[i][j];
    return std::sqrt(2.0 * s);
  };

  constexpr int kMaxSweeps = 15;
  while (out.sweeps < kMaxSweeps && off_diagonal() > threshold) {
    ++out.sweeps;
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<std::size_t, N> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = a[order[k]][order[k]];
    for (std::size_t i = 0; i < N; ++i) out.vectors[i][k] = v[i][order[k]];
  }
  return out;
}

/// A function that can report a matrix proportional to its Hessian and its
/// exact restriction to any line as a ratio of quadratics in the step.
template <class F, std::size_t N>
concept DirectionalObjective = requires(const F& f, const Vec<N>& x, const Vec<N>& dir) {
  { f.value(x) } -> std::convertible_to<double>;
  { f.hessian_proxy(x) } -> std::convertible_to<Mat<N>>;
  { f.line_ratio(x, dir) } -> std::convertible_to<QuadRatio>;
};

template <std::size_t N>
struct SearchResult {
  Vec<N> x{};
  double value = 0.0;
  int sweeps = 0;                   // sweeps performed
  bool converged = false;           // stop rule met before the sweep budget ran out
  std::vector<Vec<N>> trajectory;   // x after each sweep, trajectory[0] = start
  std::vector<double> values;       // value after each sweep, values[0] = start
};

/// Minimizes by sweeps of exact line searches along the eigenvectors of the
/// Hessian proxy. Each sweep recomputes the proxy at the sweep's start; each
/// line restriction is rebuilt at the current point. A step is taken only
/// when the line minimum exists and does not increase value(); otherwise the
/// point stays. Stops after `sweeps` sweeps or when a sweep moved x by no
/// more than tol * (1 + |x|).
template <std::size_t N, DirectionalObjective<N> F>
SearchResult<N> minimize(const F& f, Vec<N> x0, int sweeps, double tol) {
  if (sweeps < 1) throw std::invalid_argument("minimize: sweeps must be >= 1");
  SearchResult<N> out;
  out.x = x0;
  out.value = f.value(x0);
  out.trajectory.push_back(out.x);
  out.values.push_back(out.value);

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const Vec<N> sweep_start = out.x;
    const SymEigen<N> eig = eigen_sym<N>(f.hessian_proxy(out.x));
    for (std::size_t k = 0; k < N; ++k) {
      const Vec<N> dir = eig.vector(k);
      RatioMin line;
      QuadRatio q;
      try {
        q = f.line_ratio(out.x, dir);
        line = minimize_ratio(q);
      } catch (const std::invalid_argument&) {
        continue;  // line restriction not usable from here
      }
      if (!line || line->x == 0.0) continue;
      if (q.denominator(0.0) > 0.0 && line->value > q(0.0)) continue;
      const Vec<N> candidate = out.x + line->x * dir;
      const double value = f.value(candidate);
      if (!std::isfinite(value) || value > out.value) continue;
      out.x = candidate;
      out.value = value;
    }
    ++out.sweeps;
    out.trajectory.push_back(out.x);
    out.values.push_back(out.value);
    if (norm(out.x - sweep_start) <= tol * (1.0 + norm(out.x))) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace arcfit
