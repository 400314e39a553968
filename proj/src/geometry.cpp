#include "treefield/geometry.hpp"

#include <cmath>
#include <string>

namespace treefield {

Tolerance::Tolerance(double eps_abs, double eps_rel) : eps_abs_(eps_abs), eps_rel_(eps_rel) {
  auto valid = [](double e) { return std::isfinite(e) && e > 0.0 && e <= kMax; };
  if (!valid(eps_abs) || !valid(eps_rel)) {
    throw std::invalid_argument("tolerances must lie in (0, 1e-3]");
  }
}

Tolerance Tolerance::widened(double factor) const noexcept {
  Tolerance t;
  t.eps_abs_ = eps_abs_ * factor;
  t.eps_rel_ = eps_rel_ * factor;
  return t;
}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidPoint("point must have at least one coordinate");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw InvalidPoint("point coordinates must be finite");
  }
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

double Point::norm() const noexcept {
  double s = 0.0;
  for (double c : coords_) s += c * c;
  return std::sqrt(s);
}

bool Point::is_origin() const noexcept {
  for (double c : coords_) {
    if (c != 0.0) return false;
  }
  return true;
}

Point Point::origin(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

Point operator-(const Point& a, const Point& b) {
  require_same_dim(a, b);
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return Point(std::move(r));
}

Point operator+(const Point& a, const Point& b) {
  require_same_dim(a, b);
  std::vector<double> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return Point(std::move(r));
}

Point operator*(double s, const Point& p) {
  std::vector<double> r(p.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = s * p[i];
  return Point(std::move(r));
}

double dot(const Point& a, const Point& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double euclidean(const Point& a, const Point& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Point RayPoint::to_point(std::size_t dim) const {
  if (!direction) return Point::origin(dim);
  return radius * *direction;
}

RayPoint to_ray_point(const Point& p, const Tolerance& tol) {
  RayPoint rp;
  rp.radius = p.norm();
  if (rp.radius > tol.eps_abs()) rp.direction = (1.0 / rp.radius) * p;
  return rp;
}

namespace {

// Norm of the component of `longer` orthogonal to `shorter`.
double orthogonal_residual(const Point& longer, const Point& shorter, double shorter_norm) {
  const double proj = dot(longer, shorter) / (shorter_norm * shorter_norm);
  double s = 0.0;
  for (std::size_t i = 0; i < longer.dim(); ++i) {
    const double r = longer[i] - proj * shorter[i];
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace

bool collinear_through_origin(const Point& a, const Point& b, const Tolerance& tol) {
  require_same_dim(a, b);
  const double na = a.norm();
  const double nb = b.norm();
  if (na <= tol.eps_abs() || nb <= tol.eps_abs()) return true;
  const double residual = na >= nb ? orthogonal_residual(a, b, nb) : orthogonal_residual(b, a, na);
  return residual <= tol.band(na + nb);
}

bool same_directed_ray(const Point& a, const Point& b, const Tolerance& tol) {
  if (!collinear_through_origin(a, b, tol)) return false;
  if (a.norm() <= tol.eps_abs() || b.norm() <= tol.eps_abs()) return true;
  return dot(a, b) >= 0.0;
}

bool same_vertical(const Point& a, const Point& b, const Tolerance& tol) {
  require_same_dim(a, b);
  if (a.dim() != 2) throw DimensionError("vertical lines need points of the plane");
  return std::abs(a[0] - b[0]) <= tol.band(std::abs(a[0]) + std::abs(b[0]));
}

}  // namespace treefield
