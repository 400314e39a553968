#include "treefield/cd_sets.hpp"

#include <cmath>

namespace treefield {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool on_axis(double y, const Tolerance& tol) { return std::abs(y) <= tol.eps_abs(); }

bool approx_equal(const Point& a, const Point& b, const Tolerance& tol) {
  return euclidean(a, b) <= tol.band(a.norm() + b.norm());
}

template <class Decide>
Membership three_level(Decide decide, const Tolerance& tol) {
  const bool nominal = decide(tol);
  if (decide(tol.widened(0.1)) != nominal || decide(tol.widened(10.0)) != nominal) {
    return Membership::Boundary;
  }
  return nominal ? Membership::Inside : Membership::Outside;
}

void require_plane(const Point& p) {
  if (p.dim() != 2) throw DimensionError("river regions live in the plane");
}

}  // namespace

char membership_code(Membership m) {
  switch (m) {
    case Membership::Outside: return '0';
    case Membership::Inside: return '1';
    case Membership::Boundary: return 'S';
  }
  return '?';
}

bool cd_member_def(const MetricKind& kind, const Point& p1, const Point& p2, const Point& x,
                   const Tolerance& tol) {
  const double dx1 = distance(kind, x, p1, tol);
  const double defect = dx1 - distance(kind, x, p2, tol) - distance(kind, p1, p2, tol);
  return std::abs(defect) <= tol.band(dx1);
}

Membership cd_classify_def(const MetricKind& kind, const Point& p1, const Point& p2,
                           const Point& x, const Tolerance& tol) {
  return three_level([&](const Tolerance& t) { return cd_member_def(kind, p1, p2, x, t); }, tol);
}

RadialRegion cd_region_radial(const Point& p1, const Point& p2, const Tolerance& tol) {
  require_same_dim(p1, p2);
  if (approx_equal(p1, p2, tol)) return WholeSpace{};
  const bool on_segment = p2.norm() <= tol.eps_abs() ||
                          (same_directed_ray(p1, p2, tol) && p2.norm() < p1.norm());
  if (on_segment) return ComplementBeyond{p2, p1};
  return RayFrom{p2};
}

RiverRegion cd_region_river(const Point& p1, const Point& p2, const Tolerance& tol) {
  require_plane(p1);
  require_plane(p2);
  if (approx_equal(p1, p2, tol)) return WholeSpace{};
  const bool vertical = same_vertical(p1, p2, tol);
  const bool p2_on_axis = on_axis(p2[1], tol);
  if (vertical &&
      (p2_on_axis || (p2[1] * p1[1] > 0.0 && std::abs(p2[1]) < std::abs(p1[1])))) {
    return ComplementAbove{p2, p1};
  }
  if (!p2_on_axis) return VerticalRayFrom{p2};
  // Different verticals with P2 on the axis: everything on the far side of P2.
  return HalfPlane{p2[0], p2[0] > p1[0] ? 1.0 : -1.0};
}

CdRegion cd_region(const MetricKind& kind, const Point& p1, const Point& p2,
                   const Tolerance& tol) {
  switch (kind.base()) {
    case BaseMetric::Radial: return cd_region_radial(p1, p2, tol);
    case BaseMetric::River: return cd_region_river(p1, p2, tol);
    case BaseMetric::Euclidean: break;
  }
  throw std::invalid_argument("no closed-form C-set for " + kind.name());
}

bool region_contains(const RadialRegion& region, const Point& x, const Tolerance& tol) {
  return std::visit(
      overloaded{
          [&](const RayFrom& r) {
            require_same_dim(r.start, x);
            const double r0 = r.start.norm();
            return same_directed_ray(x, r.start, tol) && x.norm() >= r0 - tol.band(r0);
          },
          [&](const ComplementBeyond& r) {
            require_same_dim(r.start, x);
            const double r0 = r.start.norm();
            const bool beyond = same_directed_ray(x, r.toward, tol) && x.norm() > r0 + tol.band(r0);
            return !beyond;
          },
          [&](const WholeSpace&) { return true; },
      },
      region);
}

bool region_contains(const RiverRegion& region, const Point& x, const Tolerance& tol) {
  require_plane(x);
  return std::visit(
      overloaded{
          [&](const ComplementAbove& r) {
            const double h = std::abs(r.start[1]);
            const bool beyond = same_vertical(x, r.start, tol) && x[1] * r.toward[1] > 0.0 &&
                                std::abs(x[1]) > h + tol.band(h);
            return !beyond;
          },
          [&](const VerticalRayFrom& r) {
            const double h = std::abs(r.start[1]);
            return same_vertical(x, r.start, tol) && x[1] * r.start[1] > 0.0 &&
                   std::abs(x[1]) >= h - tol.band(h);
          },
          [&](const HalfPlane& r) {
            return r.side * (x[0] - r.boundary) >= -tol.band(std::abs(x[0]) + std::abs(r.boundary));
          },
          [&](const WholeSpace&) { return true; },
      },
      region);
}

bool region_contains(const CdRegion& region, const Point& x, const Tolerance& tol) {
  return std::visit([&](const auto& r) { return region_contains(r, x, tol); }, region);
}

Membership region_classify(const CdRegion& region, const Point& x, const Tolerance& tol) {
  return three_level([&](const Tolerance& t) { return region_contains(region, x, t); }, tol);
}

namespace {

void scan_pair(const MetricKind& kind, std::size_t pair_index, const std::pair<Point, Point>& pair,
               std::span<const Point> probes, const Tolerance& tol, ScanResult& out) {
  const CdRegion region = cd_region(kind, pair.first, pair.second, tol);
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const Membership closed = region_classify(region, probes[k], tol);
    const Membership def = cd_classify_def(kind, pair.first, pair.second, probes[k], tol);
    if (closed == Membership::Boundary || def == Membership::Boundary) {
      ++out.skipped;
      continue;
    }
    ++out.compared;
    if (closed != def) {
      out.mismatches.push_back(MismatchRecord{pair_index, k, pair.first, pair.second, probes[k],
                                              def == Membership::Inside,
                                              closed == Membership::Inside});
    }
  }
}

}  // namespace

ScanResult cd_equivalence_scan(const MetricKind& kind,
                               std::span<const std::pair<Point, Point>> pairs,
                               std::span<const Point> probes, const Tolerance& tol) {
  if (kind.base() == BaseMetric::Euclidean) {
    throw std::invalid_argument("no closed-form C-set for " + kind.name());
  }
  for (const auto& [p1, p2] : pairs) {
    require_same_dim(p1, p2);
    kind.require_dim(p1.dim());
    for (const Point& x : probes) require_same_dim(p1, x);
  }

  std::vector<ScanResult> per_pair(pairs.size());
  const auto sn = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    scan_pair(kind, ui, pairs[ui], probes, tol, per_pair[ui]);
  }

  ScanResult total;
  for (auto& r : per_pair) {
    total.compared += r.compared;
    total.skipped += r.skipped;
    for (auto& m : r.mismatches) total.mismatches.push_back(std::move(m));
  }
  return total;
}

CauchyFit cauchy_fit(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) throw FitError("need at least two samples");
  double suu = 0.0, suv = 0.0;
  bool varied = false;
  for (const auto& [u, v] : samples) {
    if (!(u > 0.0) || !std::isfinite(u) || !std::isfinite(v)) {
      throw FitError("sample abscissae must be positive and values finite");
    }
    if (u != samples.front().first) varied = true;
    suu += u * u;
    suv += u * v;
  }
  if (!varied) throw FitError("sample abscissae are all equal");
  CauchyFit fit;
  fit.c = suv / suu;
  for (const auto& [u, v] : samples) {
    fit.max_residual = std::max(fit.max_residual, std::abs(v - fit.c * u));
  }
  return fit;
}

std::vector<Point> Grid::nodes() const {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
  if (!(xmin < xmax) || !(ymin < ymax) || !std::isfinite(xmin) || !std::isfinite(xmax) ||
      !std::isfinite(ymin) || !std::isfinite(ymax)) {
    throw std::invalid_argument("grid extents must be finite with min < max");
  }
  std::vector<Point> out;
  out.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const double y = ymin + (ymax - ymin) * static_cast<double>(j) / static_cast<double>(ny - 1);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(nx - 1);
      out.push_back(Point{x, y});
    }
  }
  return out;
}

std::vector<Membership> cd_grid_mask(const MetricKind& kind, const Point& p1, const Point& p2,
                                     std::span<const Point> nodes, bool by_definition,
                                     const Tolerance& tol) {
  require_same_dim(p1, p2);
  kind.require_dim(p1.dim());
  for (const Point& x : nodes) require_same_dim(p1, x);
  std::vector<Membership> mask(nodes.size());
  std::optional<CdRegion> region;
  if (!by_definition) region = cd_region(kind, p1, p2, tol);
  const auto sn = static_cast<std::ptrdiff_t>(nodes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    mask[ui] = by_definition ? cd_classify_def(kind, p1, p2, nodes[ui], tol)
                             : region_classify(*region, nodes[ui], tol);
  }
  return mask;
}

}  // namespace treefield
