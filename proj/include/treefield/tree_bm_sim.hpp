#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "treefield/gaussian_field.hpp"

namespace treefield {

/// Ordering of planar points by (ray angle, radius). Points of one directed
/// ray form a group; groups are independent and each has independent
/// increments.
struct RadialPlan {
  std::vector<Point> points;             // input order
  std::vector<std::size_t> order;        // order[k] = input index of the k-th sorted point
  std::vector<std::size_t> group_sizes;  // sums to points.size()
  std::vector<double> variances;         // variance of the k-th increment, sorted order
};

RadialPlan radial_plan(std::span<const Point> points, const Tolerance& tol = {});

/// Per replicate: Z_k ~ N(0, variances[k]); the value at the k-th sorted point
/// is the prefix sum of Z over its group. Values are returned in input order.
/// OpenMP-parallel over replicates.
SampleBatch simulate_radial(const RadialPlan& plan, std::uint64_t seed, std::size_t reps);

/// Covariance implied by the plan: shared-prefix variance sums within a
/// group, zero across groups. Input order.
CovMatrix induced_covariance_radial(const RadialPlan& plan);

struct RiverEdge {
  std::size_t tail = 0;  // closer to the root (0, 0)
  std::size_t head = 0;
  double variance = 0.0;
};

struct PathStep {
  std::size_t edge = 0;
  int sign = 1;
};

/// Rooted spanning tree of a labelled river point set. Edge k joins the k-th
/// and (k+1)-th labelled points (or their projections when they sit on
/// different verticals), oriented away from the root.
struct RiverPlan {
  std::vector<Point> labelled_points;
  std::size_t root = 0;
  std::vector<RiverEdge> edges;
  std::vector<std::vector<PathStep>> root_paths;  // per labelled point, root first
};

/// Input points plus the origin and the projection (x, 0) of every vertical,
/// deduplicated, sorted by x then by the second coordinate.
std::vector<Point> river_closure(std::span<const Point> points, const Tolerance& tol = {});

/// Index of each input point within a closure built from it.
std::vector<std::size_t> closure_index(std::span<const Point> labelled,
                                       std::span<const Point> points, const Tolerance& tol = {});

/// Validates the labelling (NotLabelled) and ordering (NotOrdered)
/// preconditions and builds the edge tree.
RiverPlan river_plan(std::span<const Point> labelled, const Tolerance& tol = {});

/// One Z per edge with the edge variance; the value at a point is the signed
/// sum of Z along its root path. Labelled order. OpenMP-parallel over
/// replicates.
SampleBatch simulate_river(const RiverPlan& plan, std::uint64_t seed, std::size_t reps);

/// Signed overlap of root paths: sum over shared edges of sign_i * sign_j * variance.
CovMatrix induced_covariance_river(const RiverPlan& plan);

/// Columns `index` of `batch`, in that order.
SampleBatch select_points(const SampleBatch& batch, std::span<const std::size_t> index);

}  // namespace treefield
