#pragma once

// Serial reference versions of the OpenMP kernels. They are straight loops
// over the same per-item arithmetic and must agree bit-for-bit with the
// parallel versions; tests and the benchmark compare the two.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "treefield/cd_sets.hpp"
#include "treefield/gaussian_field.hpp"
#include "treefield/tree_bm_sim.hpp"
#include "treefield/tree_checks.hpp"

namespace treefield::reference {

DistanceMatrix distance_matrix(const MetricKind& kind, std::span<const Point> points,
                               const Tolerance& tol = {});

CheckResult is_tree_metric(const DistanceMatrix& dm, const Tolerance& tol = {});

CheckResult check_condition_B(const MetricKind& kind, std::span<const Point> points,
                              const Tolerance& tol = {});

CovMatrix covariance_matrix(const MetricKind& kind, const Point& o, std::span<const Point> points,
                            const Tolerance& tol = {});

SampleBatch sample_exact(const CholeskyFactor& factor, std::span<const Point> points,
                         std::uint64_t seed, std::size_t reps);

SampleBatch simulate_radial(const RadialPlan& plan, std::uint64_t seed, std::size_t reps);

SampleBatch simulate_river(const RiverPlan& plan, std::uint64_t seed, std::size_t reps);

ScanResult cd_equivalence_scan(const MetricKind& kind,
                               std::span<const std::pair<Point, Point>> pairs,
                               std::span<const Point> probes, const Tolerance& tol = {});

SymMatrix empirical_covariance(const SampleBatch& batch);

}  // namespace treefield::reference
