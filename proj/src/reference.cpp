#include "treefield/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace treefield::reference {

DistanceMatrix distance_matrix(const MetricKind& kind, std::span<const Point> points,
                               const Tolerance& tol) {
  kind.require_dim(require_uniform_dim(points));
  DistanceMatrix dm(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      dm.set(i, j, distance(kind, points[i], points[j], tol));
    }
  }
  return dm;
}

CheckResult is_tree_metric(const DistanceMatrix& dm, const Tolerance& tol) {
  const std::size_t n = dm.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double a = dm(i, j), b = dm(i, k), c = dm(j, k);
        const double slack = std::max({a - b - c, b - a - c, c - a - b});
        if (slack > tol.band(std::max({a, b, c}))) {
          return {ViolationReport{ViolationKind::Triangle, {i, j, k}, slack}};
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
          std::array<double, 3> s{dm(i, j) + dm(k, l), dm(i, k) + dm(j, l), dm(i, l) + dm(j, k)};
          std::sort(s.begin(), s.end());
          if (s[2] - s[1] > tol.band(s[2])) {
            return {ViolationReport{ViolationKind::FourPoint, {i, j, k, l}, s[2] - s[1]}};
          }
        }
      }
    }
  }
  return {};
}

CheckResult check_condition_B(const MetricKind& kind, std::span<const Point> points,
                              const Tolerance& tol) {
  if (points.empty()) return {};
  kind.require_dim(require_uniform_dim(points));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      for (std::size_t k = j + 1; k < points.size(); ++k) {
        if (auto v = condition_B_violation(kind, points[i], points[j], points[k], {i, j, k}, tol)) {
          return {std::move(v)};
        }
      }
    }
  }
  return {};
}

CovMatrix covariance_matrix(const MetricKind& kind, const Point& o, std::span<const Point> points,
                            const Tolerance& tol) {
  kind.require_dim(require_uniform_dim(points));
  require_same_dim(o, points.front());
  const std::size_t n = points.size();
  CovMatrix cov{SymMatrix(n), o, std::vector<Point>(points.begin(), points.end())};
  for (std::size_t i = 0; i < n; ++i) {
    const double di = distance(kind, o, points[i], tol);
    cov.entries(i, i) = di;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c =
          0.5 * (di + distance(kind, o, points[j], tol) - distance(kind, points[i], points[j], tol));
      cov.entries(i, j) = c;
      cov.entries(j, i) = c;
    }
  }
  return cov;
}

SampleBatch sample_exact(const CholeskyFactor& factor, std::span<const Point> points,
                         std::uint64_t seed, std::size_t reps) {
  const std::size_t n = factor.n;
  if (points.size() != n) throw DimensionError("factor and point list sizes differ");
  SampleBatch batch{seed, reps, std::vector<Point>(points.begin(), points.end()), {}};
  batch.values.reserve(reps * n);
  std::vector<double> z(n);
  for (std::size_t r = 0; r < reps; ++r) {
    auto gen = replicate_stream(seed, r);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : z) v = normal(gen);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= i; ++j) s += factor(i, j) * z[j];
      batch.values.push_back(s);
    }
  }
  return batch;
}

SampleBatch simulate_radial(const RadialPlan& plan, std::uint64_t seed, std::size_t reps) {
  const std::size_t n = plan.points.size();
  SampleBatch batch{seed, reps, plan.points, std::vector<double>(reps * n)};
  std::vector<double> z(n);
  for (std::size_t r = 0; r < reps; ++r) {
    auto gen = replicate_stream(seed, r);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : z) v = normal(gen);
    std::size_t k = 0;
    for (std::size_t g : plan.group_sizes) {
      double running = 0.0;
      for (std::size_t m = 0; m < g; ++m, ++k) {
        running += std::sqrt(plan.variances[k]) * z[k];
        batch.values[r * n + plan.order[k]] = running;
      }
    }
  }
  return batch;
}

SampleBatch simulate_river(const RiverPlan& plan, std::uint64_t seed, std::size_t reps) {
  const std::size_t n = plan.labelled_points.size();
  const std::size_t m = plan.edges.size();
  SampleBatch batch{seed, reps, plan.labelled_points, std::vector<double>(reps * n)};
  std::vector<double> z(m);
  for (std::size_t r = 0; r < reps; ++r) {
    auto gen = replicate_stream(seed, r);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : z) v = normal(gen);
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0.0;
      for (const PathStep& st : plan.root_paths[v]) {
        s += st.sign * std::sqrt(plan.edges[st.edge].variance) * z[st.edge];
      }
      batch.values[r * n + v] = s;
    }
  }
  return batch;
}

ScanResult cd_equivalence_scan(const MetricKind& kind,
                               std::span<const std::pair<Point, Point>> pairs,
                               std::span<const Point> probes, const Tolerance& tol) {
  ScanResult out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [p1, p2] = pairs[i];
    const CdRegion region = cd_region(kind, p1, p2, tol);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const Membership closed = region_classify(region, probes[k], tol);
      const Membership def = cd_classify_def(kind, p1, p2, probes[k], tol);
      if (closed == Membership::Boundary || def == Membership::Boundary) {
        ++out.skipped;
      } else {
        ++out.compared;
        if (closed != def) {
          out.mismatches.push_back({i, k, p1, p2, probes[k], def == Membership::Inside,
                                    closed == Membership::Inside});
        }
      }
    }
  }
  return out;
}

SymMatrix empirical_covariance(const SampleBatch& batch) {
  const std::size_t n = batch.size();
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < batch.reps; ++r) acc += batch(r, i) * batch(r, j);
      s(i, j) = acc / static_cast<double>(batch.reps);
      s(j, i) = s(i, j);
    }
  }
  return s;
}

}  // namespace treefield::reference
