#include <doctest.h>

#include <cmath>

#include "arcfit/dirsearch.hpp"
#include "oracles.hpp"

using namespace arcfit;

namespace {

// f(x) = (x - m)' Q (x - m) + c, its exact line restriction being a
// quadratic over a constant denominator.
template <std::size_t N>
struct Quadratic {
  Mat<N> q{};
  Vec<N> m{};
  double c = 0.0;

  double value(const Vec<N>& x) const { return quad_form(q, x - m) + c; }
  Mat<N> hessian_proxy(const Vec<N>&) const { return q; }
  QuadRatio line_ratio(const Vec<N>& x, const Vec<N>& d) const {
    const Vec<N> e = x - m;
    return {{quad_form(q, e) + c, 2.0 * dot(d, q * e), quad_form(q, d)}, {1.0, 0.0, 0.0}};
  }
};

Mat3 random_spd(oracle::Rng& rng) {
  Mat3 a{};
  for (auto& row : a)
    for (double& v : row) v = rng.uniform(-1, 1);
  Mat3 s = transpose(a) * a;
  for (int i = 0; i < 3; ++i) s[i][i] += 0.1;
  return s;
}

Mat3 random_sym(oracle::Rng& rng) {
  Mat3 a{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) a[i][j] = a[j][i] = rng.uniform(-5, 5);
  return a;
}

}  // namespace

static_assert(DirectionalObjective<Quadratic<3>, 3>);

TEST_CASE("eigen of a diagonal matrix") {
  const auto e = eigen_sym<3>({{{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}});
  CHECK(e.values[0] == 1.0);
  CHECK(e.values[1] == 2.0);
  CHECK(e.values[2] == 3.0);
  CHECK(std::abs(e.vector(0)[1]) == 1.0);
  CHECK(std::abs(e.vector(1)[2]) == 1.0);
  CHECK(std::abs(e.vector(2)[0]) == 1.0);
}

TEST_CASE("eigen of the identity") {
  const auto e = eigen_sym<3>(identity<3>());
  for (int k = 0; k < 3; ++k) {
    CHECK(e.values[k] == 1.0);
    CHECK(norm(e.vector(k)) == doctest::Approx(1.0));
  }
}

TEST_CASE("eigen pairs and reconstruction on random symmetric matrices") {
  oracle::Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const Mat3 m = random_sym(rng);
    const auto e = eigen_sym<3>(m);
    const double scale = frobenius(m);
    CHECK(e.values[0] <= e.values[1]);
    CHECK(e.values[1] <= e.values[2]);
    Mat3 rec{};
    for (int k = 0; k < 3; ++k) {
      const Vec3 v = e.vector(k);
      CHECK(norm(m * v - e.values[k] * v) <= 1e-10 * scale);
      for (int j = 0; j < 3; ++j) CHECK(std::abs(dot(v, e.vector(j)) - (j == k ? 1.0 : 0.0)) <= 1e-12);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rec[i][j] += e.values[k] * v[i] * v[j];
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(rec[i][j] - m[i][j]) <= 1e-10 * scale);
  }
}

TEST_CASE("eigen rejects non-finite input") {
  CHECK_THROWS_AS(eigen_sym<3>({{{NAN, 0, 0}, {0, 1, 0}, {0, 0, 1}}}), std::invalid_argument);
}

TEST_CASE("quadratic bowl in one sweep") {
  Quadratic<3> f;
  f.q = identity<3>();
  f.m = {3, 4, 5};
  const auto r = minimize<3>(f, Vec3{0, 0, 0}, 1, 0.0);
  CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(r.x[1] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(r.x[2] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(r.sweeps == 1);
}

TEST_CASE("start at the minimum stays put") {
  Quadratic<3> f;
  f.q = identity<3>();
  f.m = {1, 2, 3};
  const auto r = minimize<3>(f, f.m, 5, 1e-14);
  CHECK(r.x == f.m);
  CHECK(r.converged);
}

TEST_CASE("random positive definite quadratics: one sweep is exact") {
  oracle::Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    Quadratic<3> f;
    f.q = random_spd(rng);
    const Vec3 x0{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const auto r = minimize<3>(f, x0, 1, 0.0);
    CHECK(norm(r.x) <= 1e-10 * (1.0 + norm(x0)));
  }
}

TEST_CASE("monotone descent with non-quadratic line restrictions") {
  // A ratio-shaped objective: f(x) = (1 + |x - m|^2) / (1 + x2 / 4), domain x2 > -4.
  struct Ratio {
    Vec3 m{0.5, -0.2, 1.0};
    double value(const Vec3& x) const {
      const double d = 1.0 + x[2] / 4.0;
      return d > 0 ? (1.0 + dot(x - m, x - m)) / d : INFINITY;
    }
    Mat3 hessian_proxy(const Vec3&) const { return {{{2, 0, 0}, {0, 2, 0.3}, {0, 0.3, 1}}}; }
    QuadRatio line_ratio(const Vec3& x, const Vec3& dir) const {
      const Vec3 e = x - m;
      return {{1.0 + dot(e, e), 2.0 * dot(e, dir), dot(dir, dir)}, {1.0 + x[2] / 4.0, dir[2] / 4.0, 0.0}};
    }
  } f;
  const auto r = minimize<3>(f, Vec3{3, 3, 3}, 10, 0.0);
  for (std::size_t k = 1; k < r.values.size(); ++k)
    CHECK(r.values[k] <= r.values[k - 1] + 1e-12 * (1 + std::abs(r.values[k - 1])));
  CHECK(r.values.back() < r.values.front());
}

TEST_CASE("sign and order of eigenvectors do not matter on quadratics") {
  oracle::Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    Quadratic<3> f;
    f.q = random_spd(rng);
    f.m = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    // Same quadratic, but a proxy whose eigenvectors come out flipped.
    struct Flipped : Quadratic<3> {
      Mat3 hessian_proxy(const Vec3& x) const {
        Mat3 h = Quadratic<3>::hessian_proxy(x);
        for (auto& row : h)
          for (double& v : row) v = -v;
        return h;
      }
    } g;
    g.q = f.q;
    g.m = f.m;
    const Vec3 x0{5, -5, 2};
    const auto a = minimize<3>(f, x0, 3, 0.0);
    const auto b = minimize<3>(g, x0, 3, 0.0);
    CHECK(norm(a.x - b.x) <= 1e-10);
  }
}

TEST_CASE("two-dimensional search") {
  Quadratic<2> f;
  f.q = {{{2, 0.5}, {0.5, 1}}};
  f.m = {1, -1};
  const auto r = minimize<2>(f, Vec2{0, 0}, 1, 0.0);
  CHECK(norm(r.x - f.m) <= 1e-12);
}

TEST_CASE("invalid sweep count") {
  Quadratic<3> f;
  f.q = identity<3>();
  CHECK_THROWS_AS(minimize<3>(f, Vec3{}, 0, 0.0), std::invalid_argument);
}
