#include "treefield/tree_bm_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace treefield {

namespace {

void require_plane(std::span<const Point> points) {
  for (const Point& p : points) {
    if (p.dim() != 2) throw DimensionError("simulation points must lie in the plane");
  }
}

double ray_angle(const Point& p) {
  double a = std::atan2(p[1], p[0]);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

RadialPlan radial_plan(std::span<const Point> points, const Tolerance& tol) {
  if (points.empty()) throw std::invalid_argument("radial plan needs at least one point");
  require_plane(points);

  struct Item {
    std::size_t index;
    double angle;
    double radius;
  };
  std::vector<Item> at_root, others;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const RayPoint rp = to_ray_point(points[i], tol);
    if (!rp.direction) {
      at_root.push_back({i, 0.0, rp.radius});
    } else {
      others.push_back({i, ray_angle(points[i]), rp.radius});
    }
  }
  auto by_radius = [](const Item& a, const Item& b) {
    return a.radius != b.radius ? a.radius < b.radius : a.index < b.index;
  };
  std::sort(others.begin(), others.end(), [&](const Item& a, const Item& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    return by_radius(a, b);
  });

  // Maximal runs of one directed ray, compared against the run's first point.
  std::vector<std::vector<Item>> groups;
  for (const Item& it : others) {
    if (groups.empty() ||
        !same_directed_ray(points[groups.back().front().index], points[it.index], tol)) {
      groups.emplace_back();
    }
    groups.back().push_back(it);
  }
  // Angles just below 2*pi and just above 0 describe the same ray.
  if (groups.size() >= 2 &&
      same_directed_ray(points[groups.back().front().index], points[groups.front().front().index],
                        tol)) {
    auto& first = groups.front();
    first.insert(first.end(), groups.back().begin(), groups.back().end());
    groups.pop_back();
  }
  for (auto& g : groups) std::sort(g.begin(), g.end(), by_radius);
  if (!at_root.empty()) {
    std::sort(at_root.begin(), at_root.end(), by_radius);
    groups.insert(groups.begin(), at_root);
  }

  RadialPlan plan;
  plan.points.assign(points.begin(), points.end());
  const Point origin = Point::origin(2);
  for (const auto& g : groups) {
    plan.group_sizes.push_back(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      plan.order.push_back(g[k].index);
      const Point& prev = k == 0 ? origin : points[g[k - 1].index];
      plan.variances.push_back(radial_distance(prev, points[g[k].index], tol));
    }
  }
  return plan;
}

namespace {

template <class FillReplicate>
SampleBatch run_replicates(std::span<const Point> points, std::uint64_t seed, std::size_t reps,
                           std::size_t draws, FillReplicate fill) {
  const std::size_t n = points.size();
  SampleBatch batch{seed, reps, std::vector<Point>(points.begin(), points.end()),
                    std::vector<double>(reps * n, 0.0)};
  const auto sreps = static_cast<std::ptrdiff_t>(reps);
#pragma omp parallel
  {
    std::vector<double> z(draws);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < sreps; ++r) {
      auto gen = replicate_stream(seed, static_cast<std::uint64_t>(r));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (double& v : z) v = normal(gen);
      fill(z, batch.values.data() + static_cast<std::size_t>(r) * n);
    }
  }
  return batch;
}

}  // namespace

SampleBatch simulate_radial(const RadialPlan& plan, std::uint64_t seed, std::size_t reps) {
  const std::size_t n = plan.points.size();
  std::vector<double> sd(n);
  for (std::size_t k = 0; k < n; ++k) sd[k] = std::sqrt(plan.variances[k]);
  return run_replicates(plan.points, seed, reps, n, [&](const std::vector<double>& z, double* row) {
    std::size_t k = 0;
    for (std::size_t g : plan.group_sizes) {
      double running = 0.0;
      for (std::size_t m = 0; m < g; ++m, ++k) {
        running += sd[k] * z[k];
        row[plan.order[k]] = running;
      }
    }
  });
}

CovMatrix induced_covariance_radial(const RadialPlan& plan) {
  const std::size_t n = plan.points.size();
  std::vector<std::size_t> group(n), pos(n);
  std::vector<double> prefix(n);
  std::size_t k = 0;
  for (std::size_t g = 0; g < plan.group_sizes.size(); ++g) {
    double running = 0.0;
    for (std::size_t m = 0; m < plan.group_sizes[g]; ++m, ++k) {
      running += plan.variances[k];
      prefix[k] = running;
      group[plan.order[k]] = g;
      pos[plan.order[k]] = k;
    }
  }
  CovMatrix cov{SymMatrix(n), Point::origin(2), plan.points};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cov.entries(i, j) = group[i] == group[j] ? prefix[std::min(pos[i], pos[j])] : 0.0;
    }
  }
  return cov;
}

std::vector<Point> river_closure(std::span<const Point> points, const Tolerance& tol) {
  require_plane(points);
  std::vector<Point> all;
  all.reserve(points.size() + 1);
  all.push_back(Point::origin(2));
  all.insert(all.end(), points.begin(), points.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const Point& a, const Point& b) { return a[0] < b[0]; });

  std::vector<Point> out;
  std::size_t start = 0;
  while (start < all.size()) {
    // One vertical: a chain of x-values linked by same_vertical.
    std::size_t end = start + 1;
    while (end < all.size() && same_vertical(all[end - 1], all[end], tol)) ++end;

    double x = all[start][0];
    for (std::size_t i = start; i < end; ++i) {
      if (all[i][0] == 0.0) x = 0.0;
    }
    std::vector<Point> column(all.begin() + static_cast<std::ptrdiff_t>(start),
                              all.begin() + static_cast<std::ptrdiff_t>(end));
    column.push_back(Point{x, 0.0});
    std::stable_sort(column.begin(), column.end(),
                     [](const Point& a, const Point& b) { return a[1] < b[1]; });
    for (const Point& p : column) {
      if (!out.empty() && same_vertical(out.back(), p, tol) &&
          std::abs(out.back()[1] - p[1]) <= tol.band(std::abs(out.back()[1]) + std::abs(p[1]))) {
        continue;
      }
      out.push_back(p);
    }
    start = end;
  }
  return out;
}

std::vector<std::size_t> closure_index(std::span<const Point> labelled,
                                       std::span<const Point> points, const Tolerance& tol) {
  std::vector<std::size_t> index;
  index.reserve(points.size());
  for (const Point& p : points) {
    auto it = std::find_if(labelled.begin(), labelled.end(), [&](const Point& q) {
      return same_vertical(p, q, tol) &&
             std::abs(p[1] - q[1]) <= tol.band(std::abs(p[1]) + std::abs(q[1]));
    });
    if (it == labelled.end()) throw NotLabelled("point missing from the labelled set");
    index.push_back(static_cast<std::size_t>(it - labelled.begin()));
  }
  return index;
}

RiverPlan river_plan(std::span<const Point> labelled, const Tolerance& tol) {
  if (labelled.empty()) throw NotLabelled("labelled set is empty");
  require_plane(labelled);
  const std::size_t n = labelled.size();
  const double eps = tol.eps_abs();

  // Vertical groups and their ordering.
  std::vector<std::size_t> group_of(n);
  std::vector<std::size_t> group_start{0};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Point& a = labelled[k];
    const Point& b = labelled[k + 1];
    if (same_vertical(a, b, tol)) {
      if (b[1] < a[1]) throw NotOrdered("second coordinates must be nondecreasing on a vertical");
      group_of[k + 1] = group_of[k];
    } else {
      if (b[0] < a[0]) throw NotOrdered("verticals must appear by increasing first coordinate");
      group_of[k + 1] = group_of[k] + 1;
      group_start.push_back(k + 1);
    }
  }
  const std::size_t groups = group_start.size();
  group_start.push_back(n);

  // Attachment point of each vertical: its last point with y <= 0, which must
  // lie on the axis.
  std::vector<std::size_t> projection(groups);
  std::optional<std::size_t> root;
  for (std::size_t g = 0; g < groups; ++g) {
    std::optional<std::size_t> proj;
    for (std::size_t k = group_start[g]; k < group_start[g + 1]; ++k) {
      if (labelled[k][1] <= eps) proj = k;
    }
    if (!proj || std::abs(labelled[*proj][1]) > eps) {
      throw NotLabelled("vertical x = " + std::to_string(labelled[group_start[g]][0]) +
                        " lacks its projection on the axis");
    }
    projection[g] = *proj;
    if (std::abs(labelled[*proj][0]) <= tol.band(0.0)) root = *proj;
  }
  if (!root) throw NotLabelled("labelled set lacks the origin");

  RiverPlan plan;
  plan.labelled_points.assign(labelled.begin(), labelled.end());
  plan.root = *root;
  std::vector<std::optional<std::size_t>> parent_edge(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t tail, head;
    if (group_of[k] == group_of[k + 1]) {
      if (labelled[k + 1][1] > eps) {
        tail = k, head = k + 1;
      } else {
        tail = k + 1, head = k;
      }
    } else {
      const std::size_t pk = projection[group_of[k]];
      const std::size_t pk1 = projection[group_of[k + 1]];
      if (labelled[pk1][0] <= tol.band(0.0)) {
        tail = pk1, head = pk;
      } else {
        tail = pk, head = pk1;
      }
    }
    if (parent_edge[head] || head == plan.root) {
      throw NotOrdered("labelled set does not form a rooted tree");
    }
    parent_edge[head] = plan.edges.size();
    plan.edges.push_back({tail, head, river_distance(labelled[tail], labelled[head], tol)});
  }

  plan.root_paths.assign(n, {});
  std::vector<bool> done(n, false);
  done[plan.root] = true;
  for (std::size_t v = 0; v < n; ++v) {
    // Walk up to the nearest finished ancestor, then fill the chain back down.
    std::vector<std::size_t> chain;
    std::size_t u = v;
    while (!done[u]) {
      chain.push_back(u);
      if (!parent_edge[u]) throw NotLabelled("point not connected to the root");
      u = plan.edges[*parent_edge[u]].tail;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const std::size_t e = *parent_edge[*it];
      plan.root_paths[*it] = plan.root_paths[plan.edges[e].tail];
      plan.root_paths[*it].push_back({e, +1});
      done[*it] = true;
    }
  }
  return plan;
}

SampleBatch simulate_river(const RiverPlan& plan, std::uint64_t seed, std::size_t reps) {
  const std::size_t m = plan.edges.size();
  std::vector<double> sd(m);
  for (std::size_t e = 0; e < m; ++e) sd[e] = std::sqrt(plan.edges[e].variance);
  return run_replicates(plan.labelled_points, seed, reps, m,
                        [&](const std::vector<double>& z, double* row) {
                          for (std::size_t v = 0; v < plan.root_paths.size(); ++v) {
                            double s = 0.0;
                            for (const PathStep& st : plan.root_paths[v]) {
                              s += st.sign * sd[st.edge] * z[st.edge];
                            }
                            row[v] = s;
                          }
                        });
}

CovMatrix induced_covariance_river(const RiverPlan& plan) {
  const std::size_t n = plan.labelled_points.size();
  CovMatrix cov{SymMatrix(n), Point::origin(2), plan.labelled_points};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      // Root paths in a tree share exactly their common prefix.
      const auto& pi = plan.root_paths[i];
      const auto& pj = plan.root_paths[j];
      double c = 0.0;
      for (std::size_t s = 0; s < std::min(pi.size(), pj.size()) && pi[s].edge == pj[s].edge; ++s) {
        c += pi[s].sign * pj[s].sign * plan.edges[pi[s].edge].variance;
      }
      cov.entries(i, j) = c;
      cov.entries(j, i) = c;
    }
  }
  return cov;
}

SampleBatch select_points(const SampleBatch& batch, std::span<const std::size_t> index) {
  SampleBatch out{batch.seed, batch.reps, {}, std::vector<double>(batch.reps * index.size())};
  for (std::size_t i : index) {
    if (i >= batch.size()) throw IndexError("sample column out of range");
    out.points.push_back(batch.points[i]);
  }
  for (std::size_t r = 0; r < batch.reps; ++r) {
    for (std::size_t k = 0; k < index.size(); ++k) {
      out.values[r * index.size() + k] = batch(r, index[k]);
    }
  }
  return out;
}

}  // namespace treefield
