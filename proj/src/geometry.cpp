#include "steiner/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace steiner {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

// Interior angle at the vertex opposite side `opposite`, from the three
// squared side lengths.
double angle_from_sides(double adj1_sq, double adj2_sq, double opposite_sq) {
  const double denom = 2.0 * std::sqrt(adj1_sq * adj2_sq);
  const double cosine = std::clamp((adj1_sq + adj2_sq - opposite_sq) / denom, -1.0, 1.0);
  return std::acos(cosine);
}

void copy_into(std::span<const double> src, std::span<double> out) {
  std::copy(src.begin(), src.end(), out.begin());
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw DimensionError("Point: dimension must be at least 1");
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("Point: coordinates must be finite");
    }
  }
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Point Point::zeros(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

Point Point::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw DimensionError("Point::basis: index " + std::to_string(index) + " out of range for dimension " +
                         std::to_string(dim));
  }
  std::vector<double> coords(dim, 0.0);
  coords[index] = 1.0;
  return Point(std::move(coords));
}

double Point::norm() const {
  double sum = 0.0;
  for (double c : coords_) sum += c * c;
  return std::sqrt(sum);
}

Point& Point::operator+=(const Point& other) {
  require_same_dim(dim(), other.dim(), "Point::operator+=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& other) {
  require_same_dim(dim(), other.dim(), "Point::operator-=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (double& c : coords_) c *= s;
  return *this;
}

double dot(const Point& a, const Point& b) {
  require_same_dim(a.dim(), b.dim(), "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

double distance(const Point& p, const Point& q) {
  require_same_dim(p.dim(), q.dim(), "distance");
  return detail::distance(p.coords(), q.coords());
}

double angle_at(const Point& vertex, const Point& a, const Point& b) {
  require_same_dim(vertex.dim(), a.dim(), "angle_at");
  require_same_dim(vertex.dim(), b.dim(), "angle_at");
  const Point u = a - vertex;
  const Point v = b - vertex;
  if (u.norm() == 0.0 || v.norm() == 0.0) {
    throw DegenerateError("angle_at: zero-length ray");
  }
  return detail::angle_rad(u.coords(), v.coords()) * 180.0 / std::numbers::pi;
}

FermatResult fermat_point(const Point& a, const Point& b, const Point& c) {
  require_same_dim(a.dim(), b.dim(), "fermat_point");
  require_same_dim(a.dim(), c.dim(), "fermat_point");
  if (a == b || b == c || a == c) {
    throw DegenerateError("fermat_point: triangle vertices must be pairwise distinct");
  }
  std::vector<double> out(a.dim());
  const bool interior = detail::fermat_into(a.coords(), b.coords(), c.coords(), out);
  Point p(std::move(out));
  const double total = distance(p, a) + distance(p, b) + distance(p, c);
  return FermatResult{std::move(p), interior, total};
}

Point split(const Point& p) {
  std::vector<double> out;
  out.reserve(2 * p.dim());
  for (double c : p.coords()) {
    out.push_back(c / 2.0);
    out.push_back(c / 2.0);
  }
  return Point(std::move(out));
}

Point centroid(std::span<const Point> points) {
  if (points.empty()) {
    throw std::invalid_argument("centroid: empty point set");
  }
  Point sum = Point::zeros(points.front().dim());
  for (const Point& p : points) sum += p;
  return sum * (1.0 / static_cast<double>(points.size()));
}

namespace detail {

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double angle_rad(std::span<const double> u, std::span<const double> v) {
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  nu = std::sqrt(nu);
  nv = std::sqrt(nv);
  // 2 * atan2(|u^ - v^|, |u^ + v^|) stays accurate near 0 and 180 degrees.
  double minus = 0.0;
  double plus = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u[i] / nu;
    const double y = v[i] / nv;
    minus += (x - y) * (x - y);
    plus += (x + y) * (x + y);
  }
  return 2.0 * std::atan2(std::sqrt(minus), std::sqrt(plus));
}

bool fermat_into(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                 std::span<double> out) {
  const double ab = squared_distance(a, b);
  const double bc = squared_distance(b, c);
  const double ca = squared_distance(c, a);
  if (ab == 0.0 || ca == 0.0) {
    copy_into(a, out);
    return false;
  }
  if (bc == 0.0) {
    copy_into(b, out);
    return false;
  }

  const double angle_a = angle_from_sides(ab, ca, bc);
  const double angle_b = angle_from_sides(ab, bc, ca);
  const double angle_c = angle_from_sides(bc, ca, ab);
  constexpr double kWide = 2.0 * std::numbers::pi / 3.0 - kFermatAngleTolerance;
  if (angle_a >= kWide || angle_b >= kWide || angle_c >= kWide) {
    if (angle_a >= angle_b && angle_a >= angle_c) {
      copy_into(a, out);
    } else if (angle_b >= angle_c) {
      copy_into(b, out);
    } else {
      copy_into(c, out);
    }
    return false;
  }

  constexpr double kSixty = std::numbers::pi / 3.0;
  const double wa = std::sqrt(bc) / std::sin(angle_a + kSixty);
  const double wb = std::sqrt(ca) / std::sin(angle_b + kSixty);
  const double wc = std::sqrt(ab) / std::sin(angle_c + kSixty);
  const double total = wa + wb + wc;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (wa * a[i] + wb * b[i] + wc * c[i]) / total;
  }
  return true;
}

}  // namespace detail

}  // namespace steiner
