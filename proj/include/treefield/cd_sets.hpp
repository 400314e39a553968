#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "treefield/metrics.hpp"

namespace treefield {

// C_d(P1, P2) = { X : d(X, P1) = d(X, P2) + d(P1, P2) }: the points seen
// "behind" P2 from P1.

/// Closed sub-ray { t * u : t >= |start| } with u the direction of `start`.
struct RayFrom {
  Point start;
};

/// R^n minus the open sub-ray strictly beyond `start` along the directed ray
/// of `toward` (`start` lies on [0, toward)).
struct ComplementBeyond {
  Point start;
  Point toward;
};

struct WholeSpace {};

using RadialRegion = std::variant<RayFrom, ComplementBeyond, WholeSpace>;

/// R^2 minus the open vertical ray strictly beyond `start` on the side of
/// `toward` (both on one vertical, `start` between the axis and `toward`).
struct ComplementAbove {
  Point start;
  Point toward;
};

/// Closed vertical ray from `start` away from the axis.
struct VerticalRayFrom {
  Point start;
};

/// Closed half-plane { x : side * (x1 - boundary) >= 0 }.
struct HalfPlane {
  double boundary = 0.0;
  double side = 1.0;
};

using RiverRegion = std::variant<ComplementAbove, VerticalRayFrom, HalfPlane, WholeSpace>;

using CdRegion = std::variant<RadialRegion, RiverRegion>;

enum class Membership { Outside, Inside, Boundary };

char membership_code(Membership m);  // '0', '1', 'S'

bool cd_member_def(const MetricKind& kind, const Point& p1, const Point& p2, const Point& x,
                   const Tolerance& tol = {});

/// Definition-based membership, or Boundary when the decision flips between
/// tol/10 and 10*tol.
Membership cd_classify_def(const MetricKind& kind, const Point& p1, const Point& p2,
                           const Point& x, const Tolerance& tol = {});

RadialRegion cd_region_radial(const Point& p1, const Point& p2, const Tolerance& tol = {});
RiverRegion cd_region_river(const Point& p1, const Point& p2, const Tolerance& tol = {});

/// Closed-form region of the base metric of `kind` (radial or river).
CdRegion cd_region(const MetricKind& kind, const Point& p1, const Point& p2,
                   const Tolerance& tol = {});

/// Closed side wins inside the tolerance band.
bool region_contains(const RadialRegion& region, const Point& x, const Tolerance& tol = {});
bool region_contains(const RiverRegion& region, const Point& x, const Tolerance& tol = {});
bool region_contains(const CdRegion& region, const Point& x, const Tolerance& tol = {});

/// Closed-form membership, or Boundary when the decision flips between tol/10
/// and 10*tol.
Membership region_classify(const CdRegion& region, const Point& x, const Tolerance& tol = {});

struct MismatchRecord {
  std::size_t pair_index = 0;
  std::size_t probe_index = 0;
  Point p1, p2, x;
  bool def_member = false;
  bool region_member = false;
};

struct ScanResult {
  std::vector<MismatchRecord> mismatches;  // ordered by (pair_index, probe_index)
  std::size_t compared = 0;
  std::size_t skipped = 0;
};

/// Compares C-set membership by definition under `kind` against the closed
/// form of its base metric, for every (pair, probe). Probes in a boundary band
/// of either decision are counted as skipped. OpenMP-parallel over pairs.
ScanResult cd_equivalence_scan(const MetricKind& kind,
                               std::span<const std::pair<Point, Point>> pairs,
                               std::span<const Point> probes, const Tolerance& tol = {});

struct CauchyFit {
  double c = 0.0;
  double max_residual = 0.0;
};

/// Least-squares slope through the origin of (u, value) samples.
CauchyFit cauchy_fit(std::span<const std::pair<double, double>> samples);

struct Grid {
  double xmin = -10.0, xmax = 10.0, ymin = -10.0, ymax = 10.0;
  std::size_t nx = 50, ny = 50;

  /// Row-major nodes, x varying fastest.
  std::vector<Point> nodes() const;
};

/// Membership mask of C_d(p1, p2) over the grid nodes, from the closed form or
/// from the definition. OpenMP-parallel over nodes.
std::vector<Membership> cd_grid_mask(const MetricKind& kind, const Point& p1, const Point& p2,
                                     std::span<const Point> nodes, bool by_definition,
                                     const Tolerance& tol = {});

}  // namespace treefield
