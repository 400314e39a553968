#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "treefield/cd_sets.hpp"
#include "treefield/metrics.hpp"

namespace treefield {

/// Dense symmetric matrix, row-major.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return a_; }

  double max_diagonal() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// Covariance of the tree-indexed Brownian motion over a finite point list,
/// rooted at `root` where B(root) = 0.
struct CovMatrix {
  SymMatrix entries;
  Point root;
  std::vector<Point> points;
};

/// Lower-triangular L with L * L^T = covariance. Columns whose pivot vanished
/// are zero; `rank` counts the others.
struct CholeskyFactor {
  std::size_t n = 0;
  std::vector<double> lower;  // row-major n x n
  std::size_t rank = 0;

  double operator()(std::size_t i, std::size_t j) const { return lower[i * n + j]; }
};

/// Simulated field values, `reps` rows of `points.size()` values.
struct SampleBatch {
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  std::vector<Point> points;
  std::vector<double> values;  // row-major reps x n

  std::size_t size() const noexcept { return points.size(); }
  double operator()(std::size_t rep, std::size_t i) const { return values[rep * size() + i]; }
};

/// Generator for replicate `rep` of a batch seeded with `seed`. Replicates
/// get independent streams, so batches can be filled in any order.
std::mt19937_64 replicate_stream(std::uint64_t seed, std::uint64_t rep);

/// Cov(B(x), B(y)) = (d(o,x) + d(o,y) - d(x,y)) / 2.
double tree_covariance(const MetricKind& kind, const Point& o, const Point& x, const Point& y,
                       const Tolerance& tol = {});

/// OpenMP-parallel over rows; see reference::covariance_matrix.
CovMatrix covariance_matrix(const MetricKind& kind, const Point& o, std::span<const Point> points,
                            const Tolerance& tol = {});

/// Covariance (d(r,i) + d(r,j) - d(i,j)) / 2 of a bare distance matrix rooted
/// at point `root`.
SymMatrix covariance_from_distances(const DistanceMatrix& dm, std::size_t root);

/// Default pivot tolerance: 1e-10 times the largest diagonal entry.
double default_pivot_tol(const SymMatrix& cov);

/// Semidefinite Cholesky without reordering. A pivot below -pivot_tol, or a
/// vanished pivot whose column is not itself negligible, raises NotPSD.
CholeskyFactor cholesky_psd(const SymMatrix& cov, double pivot_tol);
CholeskyFactor cholesky_psd(const CovMatrix& cov);

/// Each replicate is L * z with z standard normal from replicate_stream.
/// OpenMP-parallel over replicates; see reference::sample_exact.
SampleBatch sample_exact(const CholeskyFactor& factor, std::span<const Point> points,
                         std::uint64_t seed, std::size_t reps);

/// Cov(B(x) - B(y), B(p1) - B(p2)) = (d(x,p2) + d(y,p1) - d(x,p1) - d(y,p2)) / 2.
/// The root cancels.
double increment_covariance(const MetricKind& kind, const Point& x, const Point& y,
                            const Point& p1, const Point& p2, const Tolerance& tol = {});

/// a in F_B(p1 | p2): the increment B(a) - B(p2) is uncorrelated with
/// B(p1) - B(p2).
bool f_b_member(const MetricKind& kind, const Point& p1, const Point& p2, const Point& a,
                const Tolerance& tol = {});

/// f_b_member with the same boundary-band convention as cd_classify_def.
Membership f_b_classify(const MetricKind& kind, const Point& p1, const Point& p2, const Point& a,
                        const Tolerance& tol = {});

}  // namespace treefield
