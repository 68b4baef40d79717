#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace steiner {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point in R^d. The dimension is fixed at construction and every
/// coordinate is finite.
class Point {
 public:
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  static Point zeros(std::size_t dim);
  /// Standard basis vector e_{index+1} in R^dim.
  static Point basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& values() const { return coords_; }

  double norm() const;

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  Point& operator*=(double s);

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend bool operator==(const Point& a, const Point& b) = default;

 private:
  std::vector<double> coords_;
};

double dot(const Point& a, const Point& b);

/// Euclidean distance. Throws DimensionError on mismatched dimensions.
double distance(const Point& p, const Point& q);

/// Included angle at `vertex` between rays toward `a` and `b`, in degrees.
/// Throws DegenerateError when either ray has zero length.
double angle_at(const Point& vertex, const Point& a, const Point& b);

struct FermatResult {
  Point point;
  bool is_interior = false;
  double total_length = 0.0;
};

/// Interior angles at or above 120 degrees minus this many radians count as
/// "not interior"; exactly 120 degrees yields the vertex.
inline constexpr double kFermatAngleTolerance = 1e-9;

/// Point minimizing the summed distance to a, b and c.
///
/// When every interior angle of the triangle is below 120 degrees the
/// first isogonic center is returned (barycentric weights
/// |BC| / sin(A + 60deg), ...), evaluated directly in the ambient space so the
/// result lies in the affine hull of the three inputs. Otherwise the vertex
/// carrying the wide angle is returned; collinear inputs fall into this case
/// with the middle vertex at 180 degrees.
FermatResult fermat_point(const Point& a, const Point& b, const Point& c);

/// (x1, ..., xd) -> (x1/2, x1/2, ..., xd/2, xd/2).
Point split(const Point& p);

Point centroid(std::span<const Point> points);

namespace detail {

double distance(std::span<const double> a, std::span<const double> b);
double angle_rad(std::span<const double> u, std::span<const double> v);

/// Fermat point that tolerates coincident inputs: if two of the three inputs
/// coincide, that point is returned. Writes into `out` (size = dim).
/// Returns true when the result is an interior Fermat point.
bool fermat_into(std::span<const double> a, std::span<const double> b,
                 std::span<const double> c, std::span<double> out);

}  // namespace detail

}  // namespace steiner
