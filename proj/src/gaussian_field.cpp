#include "treefield/gaussian_field.hpp"

#include <algorithm>
#include <cmath>

namespace treefield {

double SymMatrix::max_diagonal() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) m = std::max(m, (*this)(i, i));
  return m;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 replicate_stream(std::uint64_t seed, std::uint64_t rep) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(rep)));
}

double tree_covariance(const MetricKind& kind, const Point& o, const Point& x, const Point& y,
                       const Tolerance& tol) {
  return 0.5 * (distance(kind, o, x, tol) + distance(kind, o, y, tol) - distance(kind, x, y, tol));
}

CovMatrix covariance_matrix(const MetricKind& kind, const Point& o, std::span<const Point> points,
                            const Tolerance& tol) {
  const std::size_t dim = require_uniform_dim(points);
  kind.require_dim(dim);
  require_same_dim(o, points.front());
  const std::size_t n = points.size();

  std::vector<double> root_dist(n);
  for (std::size_t i = 0; i < n; ++i) root_dist[i] = distance(kind, o, points[i], tol);

  CovMatrix cov{SymMatrix(n), o, std::vector<Point>(points.begin(), points.end())};
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    cov.entries(i, i) = root_dist[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = 0.5 * (root_dist[i] + root_dist[j] - distance(kind, points[i], points[j], tol));
      cov.entries(i, j) = c;
      cov.entries(j, i) = c;
    }
  }
  return cov;
}

SymMatrix covariance_from_distances(const DistanceMatrix& dm, std::size_t root) {
  if (root >= dm.size()) throw IndexError("root index out of range");
  const std::size_t n = dm.size();
  SymMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c(i, j) = 0.5 * (dm(root, i) + dm(root, j) - dm(i, j));
  }
  return c;
}

double default_pivot_tol(const SymMatrix& cov) { return 1e-10 * cov.max_diagonal(); }

CholeskyFactor cholesky_psd(const SymMatrix& cov, double pivot_tol) {
  const std::size_t n = cov.size();
  CholeskyFactor f{n, std::vector<double>(n * n, 0.0), 0};
  auto L = [&](std::size_t i, std::size_t j) -> double& { return f.lower[i * n + j]; };

  for (std::size_t k = 0; k < n; ++k) {
    double pivot = cov(k, k);
    for (std::size_t j = 0; j < k; ++j) pivot -= L(k, j) * L(k, j);
    if (pivot < -pivot_tol) throw NotPSD(k, pivot);

    if (pivot <= pivot_tol) {
      // Vanished pivot: the rest of the column must vanish too, up to the
      // Cauchy-Schwarz bound |r_ik| <= sqrt(r_kk * r_ii).
      for (std::size_t i = k + 1; i < n; ++i) {
        double r_ik = cov(i, k);
        double r_ii = cov(i, i);
        for (std::size_t j = 0; j < k; ++j) {
          r_ik -= L(i, j) * L(k, j);
          r_ii -= L(i, j) * L(i, j);
        }
        if (std::abs(r_ik) > std::sqrt(pivot_tol * std::max(r_ii, 0.0)) + pivot_tol) {
          throw NotPSD(k, pivot);
        }
      }
      continue;
    }

    const double lkk = std::sqrt(pivot);
    L(k, k) = lkk;
    ++f.rank;
    for (std::size_t i = k + 1; i < n; ++i) {
      double r_ik = cov(i, k);
      for (std::size_t j = 0; j < k; ++j) r_ik -= L(i, j) * L(k, j);
      L(i, k) = r_ik / lkk;
    }
  }
  return f;
}

CholeskyFactor cholesky_psd(const CovMatrix& cov) {
  return cholesky_psd(cov.entries, default_pivot_tol(cov.entries));
}

SampleBatch sample_exact(const CholeskyFactor& factor, std::span<const Point> points,
                         std::uint64_t seed, std::size_t reps) {
  const std::size_t n = factor.n;
  if (points.size() != n) throw DimensionError("factor and point list sizes differ");
  SampleBatch batch{seed, reps, std::vector<Point>(points.begin(), points.end()),
                    std::vector<double>(reps * n, 0.0)};
  const auto sreps = static_cast<std::ptrdiff_t>(reps);
#pragma omp parallel
  {
    std::vector<double> z(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < sreps; ++r) {
      auto gen = replicate_stream(seed, static_cast<std::uint64_t>(r));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (double& v : z) v = normal(gen);
      double* row = batch.values.data() + static_cast<std::size_t>(r) * n;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += factor(i, j) * z[j];
        row[i] = s;
      }
    }
  }
  return batch;
}

double increment_covariance(const MetricKind& kind, const Point& x, const Point& y,
                            const Point& p1, const Point& p2, const Tolerance& tol) {
  return 0.5 * (distance(kind, x, p2, tol) + distance(kind, y, p1, tol) -
                distance(kind, x, p1, tol) - distance(kind, y, p2, tol));
}

bool f_b_member(const MetricKind& kind, const Point& p1, const Point& p2, const Point& a,
                const Tolerance& tol) {
  const double c = increment_covariance(kind, a, p2, p1, p2, tol);
  // Twice the covariance is the defect of the C-set identity; use its band.
  return std::abs(2.0 * c) <= tol.band(distance(kind, a, p1, tol));
}

Membership f_b_classify(const MetricKind& kind, const Point& p1, const Point& p2, const Point& a,
                        const Tolerance& tol) {
  const bool nominal = f_b_member(kind, p1, p2, a, tol);
  if (f_b_member(kind, p1, p2, a, tol.widened(0.1)) != nominal ||
      f_b_member(kind, p1, p2, a, tol.widened(10.0)) != nominal) {
    return Membership::Boundary;
  }
  return nominal ? Membership::Inside : Membership::Outside;
}

}  // namespace treefield
