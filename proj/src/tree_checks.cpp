#include "treefield/tree_checks.hpp"

#include <algorithm>
#include <cmath>

namespace treefield {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::FourPoint: return "four_point";
    case ViolationKind::Triangle: return "triangle";
    case ViolationKind::Ultrametric: return "ultrametric";
    case ViolationKind::ConditionB: return "condition_b";
  }
  return "unknown";
}

namespace {

void require_index(const DistanceMatrix& dm, std::size_t i) {
  if (i >= dm.size()) {
    throw IndexError("index " + std::to_string(i) + " out of range for " +
                     std::to_string(dm.size()) + " points");
  }
}

std::array<double, 3> pair_sums(const DistanceMatrix& dm, std::size_t i, std::size_t j,
                                std::size_t k, std::size_t l) {
  std::array<double, 3> s{dm(i, j) + dm(k, l), dm(i, k) + dm(j, l), dm(i, l) + dm(j, k)};
  std::sort(s.begin(), s.end());
  return s;
}

std::optional<ViolationReport> quad_violation(const DistanceMatrix& dm, std::size_t i,
                                              std::size_t j, std::size_t k, std::size_t l,
                                              const Tolerance& tol) {
  const auto s = pair_sums(dm, i, j, k, l);
  const double slack = s[2] - s[1];
  if (slack <= tol.band(s[2])) return std::nullopt;
  return ViolationReport{ViolationKind::FourPoint, {i, j, k, l}, slack};
}

std::optional<ViolationReport> triangle_violation(const DistanceMatrix& dm, std::size_t i,
                                                  std::size_t j, std::size_t k,
                                                  const Tolerance& tol) {
  const double dij = dm(i, j), dik = dm(i, k), djk = dm(j, k);
  const double slack = std::max({dij - dik - djk, dik - dij - djk, djk - dij - dik});
  if (slack <= tol.band(std::max({dij, dik, djk}))) return std::nullopt;
  return ViolationReport{ViolationKind::Triangle, {i, j, k}, slack};
}

std::optional<ViolationReport> ultrametric_violation(const DistanceMatrix& dm, std::size_t i,
                                                     std::size_t j, std::size_t k,
                                                     const Tolerance& tol) {
  std::array<double, 3> d{dm(i, j), dm(i, k), dm(j, k)};
  std::sort(d.begin(), d.end());
  // Strong triangle inequality on every side <=> the two largest sides agree.
  const double slack = d[2] - d[1];
  if (slack <= tol.band(d[2])) return std::nullopt;
  return ViolationReport{ViolationKind::Ultrametric, {i, j, k}, slack};
}

// Runs `per_leading(i)` for every leading index in parallel and keeps the
// violation with the smallest leading index. Each worker scans its own index
// range in lexicographic order, so the result is the lexicographically first
// witness regardless of thread count.
template <class PerLeading>
std::optional<ViolationReport> first_by_leading_index(std::size_t n, PerLeading per_leading) {
  std::vector<std::optional<ViolationReport>> found(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    found[static_cast<std::size_t>(i)] = per_leading(static_cast<std::size_t>(i));
  }
  for (auto& f : found) {
    if (f) return std::move(f);
  }
  return std::nullopt;
}

}  // namespace

double four_point_slack(const DistanceMatrix& dm, std::size_t i, std::size_t j, std::size_t k,
                        std::size_t l) {
  const auto s = pair_sums(dm, i, j, k, l);
  return s[2] - s[1];
}

bool four_point_holds(const DistanceMatrix& dm, std::array<std::size_t, 4> quad,
                      const Tolerance& tol) {
  for (std::size_t q : quad) require_index(dm, q);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      if (quad[a] == quad[b]) throw IndexError("quadruple indices must be distinct");
    }
  }
  return !quad_violation(dm, quad[0], quad[1], quad[2], quad[3], tol).has_value();
}

CheckResult is_tree_metric(const DistanceMatrix& dm, const Tolerance& tol) {
  const std::size_t n = dm.size();
  auto tri = first_by_leading_index(n, [&](std::size_t i) -> std::optional<ViolationReport> {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (auto v = triangle_violation(dm, i, j, k, tol)) return v;
      }
    }
    return std::nullopt;
  });
  if (tri) return {std::move(tri)};

  auto quad = first_by_leading_index(n, [&](std::size_t i) -> std::optional<ViolationReport> {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
          if (auto v = quad_violation(dm, i, j, k, l, tol)) return v;
        }
      }
    }
    return std::nullopt;
  });
  return {std::move(quad)};
}

CheckResult is_ultrametric(const DistanceMatrix& dm, const Tolerance& tol) {
  const std::size_t n = dm.size();
  return {first_by_leading_index(n, [&](std::size_t i) -> std::optional<ViolationReport> {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (auto v = ultrametric_violation(dm, i, j, k, tol)) return v;
      }
    }
    return std::nullopt;
  })};
}

std::optional<ViolationReport> condition_B_violation(const MetricKind& kind, const Point& a,
                                                     const Point& b, const Point& c,
                                                     std::array<std::size_t, 3> idx,
                                                     const Tolerance& tol) {
  const MedianCandidate m = best_median_candidate(kind, a, b, c, tol);
  const double band = median_band(kind, a, b, c, tol);
  if (m.defect > band) {
    return ViolationReport{ViolationKind::ConditionB, {idx[0], idx[1], idx[2]}, m.defect};
  }
  double worst = 0.0;
  bool ok = true;
  for (const auto& [x, y] : {std::pair{&a, &b}, std::pair{&b, &c}, std::pair{&a, &c}}) {
    if (!segment_contains(kind, *x, *y, m.point, tol)) {
      ok = false;
      const double excess = distance(kind, *x, m.point, tol) + distance(kind, m.point, *y, tol) -
                            distance(kind, *x, *y, tol);
      worst = std::max(worst, std::abs(excess));
    }
  }
  if (ok) return std::nullopt;
  return ViolationReport{ViolationKind::ConditionB, {idx[0], idx[1], idx[2]}, worst};
}

CheckResult check_condition_B(const MetricKind& kind, std::span<const Point> points,
                              const Tolerance& tol) {
  if (points.empty()) return {};
  kind.require_dim(require_uniform_dim(points));
  const std::size_t n = points.size();
  return {first_by_leading_index(n, [&](std::size_t i) -> std::optional<ViolationReport> {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (auto v = condition_B_violation(kind, points[i], points[j], points[k], {i, j, k}, tol)) {
          return v;
        }
      }
    }
    return std::nullopt;
  })};
}

}  // namespace treefield
