#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "treefield/error.hpp"

namespace treefield {

/// Absolute-plus-relative tolerance used by every predicate in the library.
/// A quantity q compared against a scale s passes when |q| <= eps_abs + eps_rel * s.
class Tolerance {
 public:
  static constexpr double kDefault = 1e-9;
  static constexpr double kMax = 1e-3;

  Tolerance() = default;
  Tolerance(double eps_abs, double eps_rel);

  double eps_abs() const noexcept { return eps_abs_; }
  double eps_rel() const noexcept { return eps_rel_; }

  double band(double scale) const noexcept { return eps_abs_ + eps_rel_ * scale; }

  /// Same tolerance widened by `factor`; used to detect probes that sit in a
  /// boundary band. The result may exceed kMax.
  Tolerance widened(double factor) const noexcept;

 private:
  double eps_abs_ = kDefault;
  double eps_rel_ = kDefault;
};

/// A point of R^n. Coordinates are always finite.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  double norm() const noexcept;
  bool is_origin() const noexcept;

  static Point origin(std::size_t dim);

  friend Point operator-(const Point& a, const Point& b);
  friend Point operator+(const Point& a, const Point& b);
  friend Point operator*(double s, const Point& p);
  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

double dot(const Point& a, const Point& b);
double euclidean(const Point& a, const Point& b);

/// Throws DimensionError unless both points live in the same space.
void require_same_dim(const Point& a, const Point& b);

/// Exact (direction, radius) form of a point. Direction is a unit vector, or
/// empty when the point is the origin within eps_abs.
struct RayPoint {
  std::optional<Point> direction;
  double radius = 0.0;

  Point to_point(std::size_t dim) const;
};

RayPoint to_ray_point(const Point& p, const Tolerance& tol = {});

/// True iff a = s*b for some real s (or b = 0), decided on the component of
/// the longer vector orthogonal to the shorter one. The origin lies on every
/// line through the origin.
bool collinear_through_origin(const Point& a, const Point& b, const Tolerance& tol = {});

/// Collinear and pointing the same way. The origin lies on every directed ray.
bool same_directed_ray(const Point& a, const Point& b, const Tolerance& tol = {});

/// Two points of the plane on one vertical line x = const (river branches).
/// Requires dimension 2.
bool same_vertical(const Point& a, const Point& b, const Tolerance& tol = {});

}  // namespace treefield
