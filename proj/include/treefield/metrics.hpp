#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "treefield/geometry.hpp"

namespace treefield {

enum class BaseMetric { Radial, River, Euclidean };

/// f(u) = u^p, p > 0.
struct PowerFamily {
  double p = 1.0;
};

/// f(u) = c*u, c > 0.
struct LinearFamily {
  double c = 1.0;
};

using Family = std::variant<PowerFamily, LinearFamily>;

double apply_family(const Family& f, double u);
std::string family_name(const Family& f);

/// Which distance function to evaluate. Parametric kinds replace the Euclidean
/// lengths inside the radial or river formula by f(length); they need not be
/// metrics and are classified by the tree checks rather than rejected here.
class MetricKind {
 public:
  static MetricKind radial() { return MetricKind(BaseMetric::Radial, std::nullopt); }
  static MetricKind river() { return MetricKind(BaseMetric::River, std::nullopt); }
  static MetricKind euclidean() { return MetricKind(BaseMetric::Euclidean, std::nullopt); }
  static MetricKind parametric(BaseMetric base, Family family);

  /// Accepts "radial", "river", "euclidean", or "<radial|river>:power:<p>" /
  /// "<radial|river>:linear:<c>".
  static MetricKind parse(std::string_view text);

  BaseMetric base() const noexcept { return base_; }
  const std::optional<Family>& family() const noexcept { return family_; }
  bool is_parametric() const noexcept { return family_.has_value(); }

  /// f(1) = 1. Always true for non-parametric kinds and power families.
  bool is_normalized() const;

  std::string name() const;

  /// Throws DimensionError when points of dimension `dim` are not admissible.
  void require_dim(std::size_t dim) const;

 private:
  MetricKind(BaseMetric base, std::optional<Family> family) : base_(base), family_(family) {}

  BaseMetric base_;
  std::optional<Family> family_;
};

/// Symmetric n x n matrix of nonnegative reals with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  /// Validates symmetry within eps_abs, nonnegativity and a zero diagonal,
  /// then stores the exactly symmetrized matrix.
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                  const Tolerance& tol = {});

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);

  std::span<const double> data() const noexcept { return entries_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

double radial_distance(const Point& a, const Point& b, const Tolerance& tol = {});
double river_distance(const Point& a, const Point& b, const Tolerance& tol = {});
double distance(const MetricKind& kind, const Point& a, const Point& b, const Tolerance& tol = {});

/// True iff x lies on the metric segment [a, b], i.e. d(a,x) + d(x,b) = d(a,b)
/// within eps_abs + eps_rel * d(a,b).
bool segment_contains(const MetricKind& kind, const Point& a, const Point& b, const Point& x,
                      const Tolerance& tol = {});

/// Largest violation of the identities d(X,O) = (X|Y,Z) = (d(X,Y)+d(X,Z)-d(Y,Z))/2
/// over X in {a,b,c}.
double median_defect(const MetricKind& kind, const Point& a, const Point& b, const Point& c,
                     const Point& o, const Tolerance& tol = {});

/// Acceptance band for median_defect on the triple: eps_abs + eps_rel * max pairwise distance.
double median_band(const MetricKind& kind, const Point& a, const Point& b, const Point& c,
                   const Tolerance& tol = {});

/// The point O with d(X,O) equal to the Gromov product at X for each X of the
/// triple. Radial and river kinds use closed forms; other kinds fall back to
/// the triple's own points. The result is always verified; MedianError is
/// raised when no candidate satisfies the identities.
Point gromov_median(const MetricKind& kind, const Point& a, const Point& b, const Point& c,
                    const Tolerance& tol = {});

/// Best median candidate and its defect. Never throws MedianError.
struct MedianCandidate {
  Point point;
  double defect = 0.0;
};
MedianCandidate best_median_candidate(const MetricKind& kind, const Point& a, const Point& b,
                                      const Point& c, const Tolerance& tol = {});

/// Pairwise distances. OpenMP-parallel over rows; see reference::distance_matrix.
DistanceMatrix distance_matrix(const MetricKind& kind, std::span<const Point> points,
                               const Tolerance& tol = {});

/// Throws DimensionError unless the list is nonempty and uniform in dimension.
std::size_t require_uniform_dim(std::span<const Point> points);

}  // namespace treefield
