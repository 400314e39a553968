#include "treefield/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace treefield {

double apply_family(const Family& f, double u) {
  return std::visit(
      [u](const auto& fam) -> double {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, PowerFamily>) {
          return std::pow(u, fam.p);
        } else {
          return fam.c * u;
        }
      },
      f);
}

std::string family_name(const Family& f) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, PowerFamily>) {
          os << "power:" << fam.p;
        } else {
          os << "linear:" << fam.c;
        }
      },
      f);
  return os.str();
}

MetricKind MetricKind::parametric(BaseMetric base, Family family) {
  if (base == BaseMetric::Euclidean) {
    throw std::invalid_argument("parametric families apply to radial or river metrics only");
  }
  const double param = std::visit(
      [](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, PowerFamily>) {
          return fam.p;
        } else {
          return fam.c;
        }
      },
      family);
  if (!std::isfinite(param) || param <= 0.0) {
    throw std::invalid_argument("family parameter must be finite and positive");
  }
  return MetricKind(base, family);
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

MetricKind MetricKind::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  BaseMetric base;
  if (head == "radial") {
    base = BaseMetric::Radial;
  } else if (head == "river") {
    base = BaseMetric::River;
  } else if (head == "euclidean") {
    base = BaseMetric::Euclidean;
  } else {
    throw std::invalid_argument("unknown metric '" + std::string(text) + "'");
  }
  if (colon == std::string_view::npos) return MetricKind(base, std::nullopt);

  const std::string_view rest = text.substr(colon + 1);
  const auto colon2 = rest.find(':');
  if (colon2 == std::string_view::npos) {
    throw std::invalid_argument("expected <metric>:<power|linear>:<value>");
  }
  const std::string_view fam = rest.substr(0, colon2);
  const double value = parse_double(rest.substr(colon2 + 1));
  if (fam == "power") return parametric(base, PowerFamily{value});
  if (fam == "linear") return parametric(base, LinearFamily{value});
  throw std::invalid_argument("unknown family '" + std::string(fam) + "'");
}

bool MetricKind::is_normalized() const {
  if (!family_) return true;
  return apply_family(*family_, 1.0) == 1.0;
}

std::string MetricKind::name() const {
  std::string s;
  switch (base_) {
    case BaseMetric::Radial: s = "radial"; break;
    case BaseMetric::River: s = "river"; break;
    case BaseMetric::Euclidean: s = "euclidean"; break;
  }
  if (family_) s += ":" + family_name(*family_);
  return s;
}

void MetricKind::require_dim(std::size_t dim) const {
  if (dim == 0) throw DimensionError("points need at least one coordinate");
  if (base_ == BaseMetric::River && dim != 2) {
    throw DimensionError("the river metric is defined on the plane only (got dimension " +
                         std::to_string(dim) + ")");
  }
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                         const Tolerance& tol) {
  const std::size_t n = rows.size();
  DistanceMatrix dm(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw ParseError("distance matrix row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " +
                       std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(rows[i][i]) || std::abs(rows[i][i]) > tol.eps_abs()) {
      throw ParseError("distance matrix diagonal entry " + std::to_string(i) + " is not zero");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = rows[i][j];
      const double b = rows[j][i];
      if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
        throw ParseError("distance matrix entries must be finite and nonnegative");
      }
      if (std::abs(a - b) > tol.eps_abs()) {
        throw ParseError("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      }
      dm.set(i, j, 0.5 * (a + b));
    }
  }
  return dm;
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i >= n_ || j >= n_) throw IndexError("distance matrix index out of range");
  entries_[i * n_ + j] = value;
  entries_[j * n_ + i] = value;
}

double radial_distance(const Point& a, const Point& b, const Tolerance& tol) {
  if (collinear_through_origin(a, b, tol)) return euclidean(a, b);
  return a.norm() + b.norm();
}

double river_distance(const Point& a, const Point& b, const Tolerance& tol) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw DimensionError("the river metric is defined on the plane only");
  }
  if (same_vertical(a, b, tol)) return std::abs(a[1] - b[1]);
  // Vertical legs first so that swapping a and b gives the same bits.
  return (std::abs(a[1]) + std::abs(b[1])) + std::abs(a[0] - b[0]);
}

namespace {

double parametric_distance(BaseMetric base, const Family& f, const Point& a, const Point& b,
                           const Tolerance& tol) {
  if (base == BaseMetric::Radial) {
    if (collinear_through_origin(a, b, tol)) return apply_family(f, euclidean(a, b));
    return apply_family(f, a.norm()) + apply_family(f, b.norm());
  }
  if (a.dim() != 2 || b.dim() != 2) {
    throw DimensionError("the river metric is defined on the plane only");
  }
  if (same_vertical(a, b, tol)) return apply_family(f, std::abs(a[1] - b[1]));
  // Vertical legs through g1, the leg along the axis through g2; one family
  // serves as both.
  return (apply_family(f, std::abs(a[1])) + apply_family(f, std::abs(b[1]))) +
         apply_family(f, std::abs(a[0] - b[0]));
}

}  // namespace

double distance(const MetricKind& kind, const Point& a, const Point& b, const Tolerance& tol) {
  require_same_dim(a, b);
  if (kind.family()) return parametric_distance(kind.base(), *kind.family(), a, b, tol);
  switch (kind.base()) {
    case BaseMetric::Radial: return radial_distance(a, b, tol);
    case BaseMetric::River: return river_distance(a, b, tol);
    case BaseMetric::Euclidean: return euclidean(a, b);
  }
  return 0.0;
}

bool segment_contains(const MetricKind& kind, const Point& a, const Point& b, const Point& x,
                      const Tolerance& tol) {
  const double dab = distance(kind, a, b, tol);
  const double excess = distance(kind, a, x, tol) + distance(kind, x, b, tol) - dab;
  return std::abs(excess) <= tol.band(dab);
}

double median_defect(const MetricKind& kind, const Point& a, const Point& b, const Point& c,
                     const Point& o, const Tolerance& tol) {
  const double dab = distance(kind, a, b, tol);
  const double dac = distance(kind, a, c, tol);
  const double dbc = distance(kind, b, c, tol);
  const double pa = 0.5 * (dab + dac - dbc);
  const double pb = 0.5 * (dab + dbc - dac);
  const double pc = 0.5 * (dac + dbc - dab);
  return std::max({std::abs(distance(kind, a, o, tol) - pa),
                   std::abs(distance(kind, b, o, tol) - pb),
                   std::abs(distance(kind, c, o, tol) - pc)});
}

double median_band(const MetricKind& kind, const Point& a, const Point& b, const Point& c,
                   const Tolerance& tol) {
  return tol.band(std::max(
      {distance(kind, a, b, tol), distance(kind, a, c, tol), distance(kind, b, c, tol)}));
}

namespace {

// The meet of the two points with the largest Gromov product at the root; the
// root itself when no two points share a directed ray.
Point radial_median(const Point& a, const Point& b, const Point& c, const Tolerance& tol) {
  const std::array<std::pair<const Point*, const Point*>, 3> pairs{
      {{&a, &b}, {&a, &c}, {&b, &c}}};
  const Point* best = nullptr;
  double best_product = 0.0;
  for (const auto& [x, y] : pairs) {
    if (!same_directed_ray(*x, *y, tol)) continue;
    const Point* shorter = x->norm() <= y->norm() ? x : y;
    const double product = shorter->norm();
    if (product > best_product) {
      best_product = product;
      best = shorter;
    }
  }
  return best ? *best : Point::origin(a.dim());
}

const Point& middle_by(const Point& a, const Point& b, const Point& c, std::size_t axis) {
  std::array<const Point*, 3> pts{&a, &b, &c};
  std::sort(pts.begin(), pts.end(),
            [axis](const Point* l, const Point* r) { return (*l)[axis] < (*r)[axis]; });
  return *pts[1];
}

Point river_median(const Point& a, const Point& b, const Point& c, const Tolerance& tol) {
  const bool ab = same_vertical(a, b, tol);
  const bool ac = same_vertical(a, c, tol);
  const bool bc = same_vertical(b, c, tol);
  if (ab && ac && bc) return middle_by(a, b, c, 1);

  const Point* y = nullptr;
  const Point* z = nullptr;
  if (ab) {
    y = &a, z = &b;
  } else if (ac) {
    y = &a, z = &c;
  } else if (bc) {
    y = &b, z = &c;
  }
  if (y) {
    // Two points on one vertical: the third joins it at the foot (x, 0), so
    // the median is the middle of {y, z, foot} along that vertical.
    const Point foot{(*y)[0], 0.0};
    return middle_by(*y, *z, foot, 1);
  }
  return Point{middle_by(a, b, c, 0)[0], 0.0};
}

std::optional<Point> closed_form_median(const MetricKind& kind, const Point& a, const Point& b,
                                        const Point& c, const Tolerance& tol) {
  switch (kind.base()) {
    case BaseMetric::Radial: return radial_median(a, b, c, tol);
    case BaseMetric::River: return river_median(a, b, c, tol);
    case BaseMetric::Euclidean: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

MedianCandidate best_median_candidate(const MetricKind& kind, const Point& a, const Point& b,
                                      const Point& c, const Tolerance& tol) {
  require_same_dim(a, b);
  require_same_dim(a, c);
  kind.require_dim(a.dim());
  const double band = median_band(kind, a, b, c, tol);

  std::optional<MedianCandidate> best;
  auto consider = [&](const Point& o) {
    const double defect = median_defect(kind, a, b, c, o, tol);
    if (!best || defect < best->defect) best = MedianCandidate{o, defect};
    return defect <= band;
  };
  if (auto o = closed_form_median(kind, a, b, c, tol)) {
    if (consider(*o)) return *best;
  }
  for (const Point* p : {&a, &b, &c}) {
    if (consider(*p)) return *best;
  }
  return *best;
}

Point gromov_median(const MetricKind& kind, const Point& a, const Point& b, const Point& c,
                    const Tolerance& tol) {
  MedianCandidate m = best_median_candidate(kind, a, b, c, tol);
  if (m.defect > median_band(kind, a, b, c, tol)) {
    throw MedianError("no median satisfies the Gromov identities under " + kind.name() +
                      " (defect " + std::to_string(m.defect) + ")");
  }
  return std::move(m.point);
}

std::size_t require_uniform_dim(std::span<const Point> points) {
  if (points.empty()) throw DimensionError("point list is empty");
  const std::size_t dim = points.front().dim();
  for (const Point& p : points) {
    if (p.dim() != dim) throw DimensionError("points of mixed dimension");
  }
  return dim;
}

DistanceMatrix distance_matrix(const MetricKind& kind, std::span<const Point> points,
                               const Tolerance& tol) {
  kind.require_dim(require_uniform_dim(points));
  const std::size_t n = points.size();
  DistanceMatrix dm(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (std::size_t j = ui + 1; j < n; ++j) {
      dm.set(ui, j, distance(kind, points[ui], points[j], tol));
    }
  }
  return dm;
}

}  // namespace treefield
