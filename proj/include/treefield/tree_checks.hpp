#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treefield/metrics.hpp"

namespace treefield {

enum class ViolationKind { FourPoint, Triangle, Ultrametric, ConditionB };

std::string to_string(ViolationKind kind);

/// A failed inequality on a finite point set. `slack` is the amount by which
/// the inequality fails (always > 0); `witness` lists distinct point indices.
struct ViolationReport {
  ViolationKind kind;
  std::vector<std::size_t> witness;
  double slack = 0.0;
};

/// Outcome of a scan: passed when no violation was found.
struct CheckResult {
  std::optional<ViolationReport> violation;

  bool passed() const noexcept { return !violation.has_value(); }
  explicit operator bool() const noexcept { return passed(); }
};

/// Amount by which the four-point condition fails on (i, j, k, l): the
/// largest of the three pair sums minus the middle one. Zero or negative
/// values are never returned; 0 means the two largest sums coincide.
double four_point_slack(const DistanceMatrix& dm, std::size_t i, std::size_t j, std::size_t k,
                        std::size_t l);

/// d(A,B) + d(C,D) <= max{d(A,C) + d(B,D), d(A,D) + d(B,C)} within the band,
/// for all three pairings of the quadruple.
bool four_point_holds(const DistanceMatrix& dm, std::array<std::size_t, 4> quad,
                      const Tolerance& tol = {});

/// Exhaustive triangle-inequality scan over triples, then four-point scan over
/// quadruples. The returned witness is the lexicographically smallest one of
/// the first failing scan. OpenMP-parallel over the leading index.
CheckResult is_tree_metric(const DistanceMatrix& dm, const Tolerance& tol = {});

/// Strong triangle inequality d(A,B) <= max{d(A,C), d(B,C)} over all triples.
CheckResult is_ultrametric(const DistanceMatrix& dm, const Tolerance& tol = {});

/// For every triple of points, the median computed by gromov_median must lie
/// on all three metric segments. A triple without a valid median is reported
/// as a ConditionB violation.
CheckResult check_condition_B(const MetricKind& kind, std::span<const Point> points,
                              const Tolerance& tol = {});

/// Per-triple worker shared by the parallel scan and the reference scan.
std::optional<ViolationReport> condition_B_violation(const MetricKind& kind, const Point& a,
                                                     const Point& b, const Point& c,
                                                     std::array<std::size_t, 3> idx,
                                                     const Tolerance& tol);

}  // namespace treefield
