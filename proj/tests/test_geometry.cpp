#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "steiner/geometry.hpp"
#include "support.hpp"

using namespace steiner;
using test_support::random_direction;
using test_support::random_point;

namespace {

double total_distance(const Point& x, const Point& a, const Point& b, const Point& c) {
  return distance(x, a) + distance(x, b) + distance(x, c);
}

}  // namespace

TEST_CASE("point construction") {
  CHECK_THROWS_AS(Point(std::vector<double>{}), DimensionError);
  CHECK_THROWS_AS(Point({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Point::basis(3, 3), DimensionError);
  const Point e = Point::basis(4, 2);
  CHECK(e.dim() == 4);
  CHECK(e[2] == 1.0);
  CHECK(e.norm() == 1.0);
}

TEST_CASE("distance") {
  CHECK(distance(Point{1, 0, 0}, Point{0, 1, 0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(distance(Point{0, 0}, Point{0, 0}) == 0.0);
  CHECK(distance(Point::basis(3, 0), Point{1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
        doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(distance(Point{0, 0}, Point{0, 0, 0}), DimensionError);

  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Point p = random_point(rng, 5);
    const Point q = random_point(rng, 5);
    CHECK(distance(p, q) == distance(q, p));
    CHECK(distance(p, q) > 0.0);
  }
}

TEST_CASE("angle_at") {
  const Point c{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(angle_at(c, Point::basis(3, 0), Point::basis(3, 1)) == doctest::Approx(120.0).epsilon(1e-13));
  CHECK(angle_at(Point{0, 0, 0}, Point::basis(3, 0), Point::basis(3, 1)) == doctest::Approx(90.0).epsilon(1e-13));
  CHECK(angle_at(Point{0, 0}, Point{1, 0}, Point{-1, 0}) == doctest::Approx(180.0).epsilon(1e-13));
  CHECK(angle_at(Point{0, 0}, Point{1, 0}, Point{2, 0}) == 0.0);
  CHECK_THROWS_AS(angle_at(Point{0, 0}, Point{0, 0}, Point{1, 0}), DegenerateError);
  CHECK_THROWS_AS(angle_at(Point{0, 0}, Point{1, 0}, Point{1, 0, 0}), DimensionError);
}

TEST_CASE("angle_at is invariant under rigid motions and scaling") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 2 + trial % 5;
    const Point v = random_point(rng, dim);
    const Point a = random_point(rng, dim);
    const Point b = random_point(rng, dim);
    const double angle = angle_at(v, a, b);

    const Point shift = random_point(rng, dim, -10, 10);
    CHECK(angle_at(v + shift, a + shift, b + shift) == doctest::Approx(angle).epsilon(1e-9));

    // Two reflections compose to a rotation; one is already orthogonal.
    const Point h1 = random_direction(rng, dim);
    const Point h2 = random_direction(rng, dim);
    auto rot = [&](const Point& p) { return test_support::reflect(test_support::reflect(p, h1), h2); };
    CHECK(angle_at(rot(v), rot(a), rot(b)) == doctest::Approx(angle).epsilon(1e-9));
    CHECK(angle_at(test_support::reflect(v, h1), test_support::reflect(a, h1), test_support::reflect(b, h1)) ==
          doctest::Approx(angle).epsilon(1e-9));

    const double s = 0.01 + 100.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(angle_at(v * s, a * s, b * s) == doctest::Approx(angle).epsilon(1e-9));
  }
}

TEST_CASE("fermat_point examples") {
  SUBCASE("unit basis triangle") {
    const auto f = fermat_point(Point::basis(3, 0), Point::basis(3, 1), Point::basis(3, 2));
    CHECK(f.is_interior);
    for (std::size_t i = 0; i < 3; ++i) CHECK(f.point[i] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(f.total_length == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  }
  SUBCASE("wide angle at the origin") {
    const auto f = fermat_point(Point{0, 0}, Point{1, 0}, Point{-1, 0.1});
    CHECK_FALSE(f.is_interior);
    CHECK(f.point == Point{0, 0});
  }
  SUBCASE("isosceles triangle with apex height 1/sqrt(3)") {
    const double h = std::numbers::sqrt2 / 2;
    const auto f = fermat_point(Point{-h, 0}, Point{h, 0}, Point{0, 1 / std::sqrt(3.0)});
    CHECK(f.is_interior);
    CHECK(std::abs(f.point[0]) < 1e-15);
    CHECK(f.point[1] == doctest::Approx(1 / std::sqrt(6.0)).epsilon(1e-14));
  }
  SUBCASE("collinear points give the middle one") {
    const auto f = fermat_point(Point{0, 0, 0}, Point{2, 2, 2}, Point{0.5, 0.5, 0.5});
    CHECK_FALSE(f.is_interior);
    CHECK(f.point == Point{0.5, 0.5, 0.5});
  }
  SUBCASE("exactly 120 degrees is not interior") {
    // Angle at the origin between (1,0) and (-1/2, sqrt(3)/2) is 120 degrees.
    const auto f = fermat_point(Point{0, 0}, Point{1, 0}, Point{-0.5, std::sqrt(3.0) / 2});
    CHECK_FALSE(f.is_interior);
    CHECK(f.point == Point{0, 0});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fermat_point(Point{0, 0}, Point{0, 0}, Point{1, 1}), DegenerateError);
    CHECK_THROWS_AS(fermat_point(Point{0, 0}, Point{1, 0}, Point{1, 1, 1}), DimensionError);
  }
}

TEST_CASE("fermat_point matches a geometric-median oracle and is locally minimal") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 2 + trial % 6;
    const Point a = random_point(rng, dim);
    const Point b = random_point(rng, dim);
    const Point c = random_point(rng, dim);
    const auto f = fermat_point(a, b, c);

    const Point oracle = test_support::geometric_median({a, b, c});
    CHECK(distance(f.point, oracle) < 1e-6);
    CHECK(f.total_length == doctest::Approx(total_distance(f.point, a, b, c)).epsilon(1e-14));
    CHECK(f.total_length <= total_distance(oracle, a, b, c) + 1e-12);

    if (trial < 4) {
      for (int k = 0; k < 10000; ++k) {
        const Point delta = random_direction(rng, dim) * 1e-4;
        CHECK(total_distance(f.point + delta, a, b, c) >= f.total_length - 1e-14);
      }
    }

    if (f.is_interior) {
      CHECK(std::abs(angle_at(f.point, a, b) - 120.0) < 1e-7);
      CHECK(std::abs(angle_at(f.point, b, c) - 120.0) < 1e-7);
      CHECK(std::abs(angle_at(f.point, c, a) - 120.0) < 1e-7);
    } else {
      CHECK((f.point == a || f.point == b || f.point == c));
    }

    // The result lies in the affine hull: it is a + s (b - a) + t (c - a).
    const Point u = b - a;
    const Point v = c - a;
    const Point w = f.point - a;
    const double uu = dot(u, u), uv = dot(u, v), vv = dot(v, v);
    const double det = uu * vv - uv * uv;
    const double s = (dot(w, u) * vv - dot(w, v) * uv) / det;
    const double t = (dot(w, v) * uu - dot(w, u) * uv) / det;
    CHECK(distance(a + u * s + v * t, f.point) < 1e-12);
    CHECK(s >= -1e-12);
    CHECK(t >= -1e-12);
    CHECK(s + t <= 1 + 1e-12);
  }
}

TEST_CASE("coincident inputs are tolerated by the sweep primitive") {
  std::vector<double> out(2);
  const std::vector<double> a{0, 0}, b{1, 0}, c{0, 0};
  CHECK_FALSE(detail::fermat_into(a, b, c, out));
  CHECK(out == a);
  CHECK_FALSE(detail::fermat_into(b, a, a, out));
  CHECK(out == a);
}

TEST_CASE("split") {
  CHECK(split(Point{1, 0}) == Point{0.5, 0.5, 0, 0});
  CHECK(split(Point::zeros(3)) == Point::zeros(6));

  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + trial % 7;
    const Point x = random_point(rng, dim);
    const Point y = random_point(rng, dim);
    const Point z = random_point(rng, dim);
    CHECK(split(x).norm() == doctest::Approx(x.norm() / std::numbers::sqrt2).epsilon(1e-13));
    CHECK(distance(split(x), split(y)) == doctest::Approx(distance(x, y) / std::numbers::sqrt2).epsilon(1e-13));
    CHECK(angle_at(split(y), split(x), split(z)) == doctest::Approx(angle_at(y, x, z)).epsilon(1e-10));
  }
}

TEST_CASE("centroid") {
  const std::vector<Point> pts{Point{0, 0}, Point{2, 0}, Point{1, 3}};
  CHECK(centroid(pts) == Point{1, 1});
  CHECK_THROWS(centroid(std::vector<Point>{}));
}
