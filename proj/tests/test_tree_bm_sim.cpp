#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "treefield/error.hpp"
#include "treefield/reference.hpp"
#include "treefield/tree_bm_sim.hpp"

using namespace treefield;

namespace {

std::vector<std::vector<double>> rows_of(const SymMatrix& m) {
  std::vector<std::vector<double>> r(m.size(), std::vector<double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r[i][j] = m(i, j);
  return r;
}

// Covariance rebuilt from the explicit tree graph, rooted at the origin.
std::vector<std::vector<double>> graph_covariance(const std::vector<std::vector<double>>& d) {
  const std::size_t n = d.size() - 1;  // last point is the origin
  std::vector<std::vector<double>> c(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i][j] = 0.5 * (d[n][i] + d[n][j] - d[i][j]);
  return c;
}

void check_close(const SymMatrix& a, const std::vector<std::vector<double>>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a(i, j) - b[i][j]) <= tol);
}

}  // namespace

TEST_SUITE("tree_bm_sim") {
  TEST_CASE("radial plan examples") {
    auto plan = radial_plan(std::vector<Point>{{2, 0}, {1, 0}, {0, 1}});
    CHECK(plan.order == std::vector<std::size_t>{1, 0, 2});
    CHECK(plan.group_sizes == std::vector<std::size_t>{2, 1});
    CHECK(plan.variances == std::vector<double>{1, 1, 1});

    plan = radial_plan(std::vector<Point>{{0, 5}, {0, 1}, {0, 2}});
    CHECK(plan.variances == std::vector<double>{1, 1, 3});

    plan = radial_plan(std::vector<Point>{{0, 0}});
    CHECK(plan.group_sizes == std::vector<std::size_t>{1});
    CHECK(plan.variances == std::vector<double>{0});
    CHECK_THROWS_AS(radial_plan(std::vector<Point>{{1, 0, 0}}), DimensionError);
  }

  TEST_CASE("radial plan merges rays across the angle seam") {
    const auto plan = radial_plan(std::vector<Point>{{1, -1e-17}, {0, 1}, {2, 0}});
    CHECK(plan.group_sizes.size() == 2);
    const auto cov = induced_covariance_radial(plan);
    CHECK(cov.entries(0, 2) == doctest::Approx(1.0));
  }

  TEST_CASE("induced radial covariance") {
    auto cov = induced_covariance_radial(radial_plan(std::vector<Point>{{1, 0}, {2, 0}}));
    CHECK(rows_of(cov.entries) == std::vector<std::vector<double>>{{1, 1}, {1, 2}});
    cov = induced_covariance_radial(radial_plan(std::vector<Point>{{1, 0}, {0, 1}}));
    CHECK(rows_of(cov.entries) == std::vector<std::vector<double>>{{1, 0}, {0, 1}});
  }

  TEST_CASE("radial exactness against the graph oracle, with duplicates and the origin") {
    std::mt19937_64 g(103);
    std::uniform_int_distribution<int> n(1, 40);
    for (int rep = 0; rep < 40; ++rep) {
      std::vector<Point> pts;
      const int m = n(g);
      for (int i = 0; i < m; ++i) pts.push_back(oracle::random_radial_point(g));
      if (rep % 3 == 0) pts.push_back(pts.front());
      const auto plan = radial_plan(pts);
      std::size_t total = 0;
      for (auto s : plan.group_sizes) total += s;
      CHECK(total == pts.size());
      auto with_root = pts;
      with_root.push_back(Point{0, 0});
      check_close(induced_covariance_radial(plan).entries,
                  graph_covariance(oracle::radial_graph_distances(with_root)), 1e-9);
    }
  }

  TEST_CASE("radial simulation") {
    const std::vector<Point> zeros{{0, 0}, {0, 0}};
    auto b = simulate_radial(radial_plan(zeros), 4, 10);
    CHECK(std::all_of(b.values.begin(), b.values.end(), [](double v) { return v == 0.0; }));

    const std::vector<Point> pts{{1, 0}, {2, 0}, {0, 3}};
    const auto plan = radial_plan(pts);
    b = simulate_radial(plan, 7, 3);
    CHECK(b.values.size() == 9);
    CHECK(b.values == simulate_radial(plan, 7, 3).values);
    CHECK(b.values != simulate_radial(plan, 8, 3).values);
    CHECK(b.values == reference::simulate_radial(plan, 7, 3).values);
    CHECK(simulate_radial(plan, 7, 5000).values == reference::simulate_radial(plan, 7, 5000).values);
  }

  TEST_CASE("river closure") {
    CHECK(river_closure(std::vector<Point>{{2, 3}}) == std::vector<Point>{{0, 0}, {2, 0}, {2, 3}});
    CHECK(river_closure(std::vector<Point>{{-1, 2}, {1, -1}}) ==
          std::vector<Point>{{-1, 0}, {-1, 2}, {0, 0}, {1, -1}, {1, 0}});
    CHECK(river_closure(std::vector<Point>{{0, 0}}) == std::vector<Point>{{0, 0}});
    CHECK(river_closure(std::vector<Point>{{2, 3}, {2, 3}, {2, 0}}).size() == 3);
    CHECK_THROWS_AS(river_closure(std::vector<Point>{{1, 2, 3}}), DimensionError);
  }

  TEST_CASE("river plan examples") {
    auto plan = river_plan(std::vector<Point>{{0, 0}, {2, 0}, {2, 3}});
    REQUIRE(plan.edges.size() == 2);
    CHECK(plan.root == 0);
    CHECK(plan.edges[0].tail == 0);
    CHECK(plan.edges[0].head == 1);
    CHECK(plan.edges[0].variance == 2.0);
    CHECK(plan.edges[1].tail == 1);
    CHECK(plan.edges[1].head == 2);
    CHECK(plan.edges[1].variance == 3.0);
    REQUIRE(plan.root_paths[2].size() == 2);
    CHECK(plan.root_paths[2][0].edge == 0);
    CHECK(plan.root_paths[2][1].edge == 1);
    CHECK(plan.root_paths[2][1].sign == 1);
    CHECK(induced_covariance_river(plan).entries(2, 2) == 5.0);

    // Below the axis: edge oriented downward from the foot.
    plan = river_plan(river_closure(std::vector<Point>{{2, -1}, {2, 3}}));
    // labelled: (0,0), (2,-1), (2,0), (2,3)
    const auto cov = induced_covariance_river(plan);
    CHECK(cov.entries(1, 1) == 3.0);
    CHECK(cov.entries(1, 3) == 2.0);
    CHECK(cov.entries(2, 3) == 2.0);
    for (const auto& path : plan.root_paths)
      for (const auto& st : path) CHECK(st.sign == 1);

    plan = river_plan(std::vector<Point>{{0, 0}});
    CHECK(plan.edges.empty());
    CHECK(plan.root_paths[0].empty());
  }

  TEST_CASE("river plan preconditions") {
    CHECK_THROWS_AS(river_plan(std::vector<Point>{{2, 0}, {2, 3}}), NotLabelled);
    CHECK_THROWS_AS(river_plan(std::vector<Point>{{0, 0}, {2, 3}}), NotLabelled);
    CHECK_THROWS_AS(river_plan(std::vector<Point>{{0, 0}, {2, 3}, {2, 0}}), NotOrdered);
    CHECK_THROWS_AS(river_plan(std::vector<Point>{{2, 0}, {0, 0}}), NotOrdered);
    CHECK_THROWS_AS(river_plan(std::vector<Point>{}), NotLabelled);
  }

  TEST_CASE("river exactness against the graph oracle") {
    std::mt19937_64 g(107);
    std::uniform_int_distribution<int> n(1, 40);
    for (int rep = 0; rep < 40; ++rep) {
      std::vector<Point> pts;
      const int m = n(g);
      for (int i = 0; i < m; ++i) pts.push_back(oracle::random_river_point(g));
      const auto closure = river_closure(pts);
      const auto plan = river_plan(closure);
      CHECK(plan.edges.size() + 1 == closure.size());
      auto with_root = closure;
      with_root.push_back(Point{0, 0});
      const auto cov = induced_covariance_river(plan);
      check_close(cov.entries, graph_covariance(oracle::river_graph_distances(with_root)), 1e-9);
      for (std::size_t i = 0; i < closure.size(); ++i) {
        CHECK(cov.entries(i, i) == doctest::Approx(river_distance(Point{0, 0}, closure[i])));
      }
      const auto idx = closure_index(closure, pts);
      for (std::size_t i = 0; i < pts.size(); ++i) CHECK(closure[idx[i]] == pts[i]);
    }
  }

  TEST_CASE("river simulation") {
    const auto plan = river_plan(river_closure(std::vector<Point>{{2, 3}, {-1, -2}, {2, -4}}));
    const auto b = simulate_river(plan, 11, 2000);
    for (std::size_t r = 0; r < b.reps; ++r) CHECK(b(r, plan.root) == 0.0);
    CHECK(b.values == simulate_river(plan, 11, 2000).values);
    CHECK(b.values == reference::simulate_river(plan, 11, 2000).values);
  }

  TEST_CASE("permutation invariance") {
    std::mt19937_64 g(109);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<Point> pts;
      for (int i = 0; i < 15; ++i) pts.push_back(oracle::random_radial_point(g));
      std::vector<std::size_t> perm(pts.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), g);
      std::vector<Point> shuffled;
      for (auto p : perm) shuffled.push_back(pts[p]);
      const auto a = induced_covariance_radial(radial_plan(pts)).entries;
      const auto b = induced_covariance_radial(radial_plan(shuffled)).entries;
      for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = 0; j < perm.size(); ++j)
          CHECK(b(i, j) == doctest::Approx(a(perm[i], perm[j])).epsilon(1e-12));

      std::vector<Point> rv;
      for (int i = 0; i < 15; ++i) rv.push_back(oracle::random_river_point(g));
      std::vector<Point> rs;
      for (auto p : perm) rs.push_back(rv[p]);
      CHECK(river_closure(rv) == river_closure(rs));
    }
  }

  TEST_CASE("select_points") {
    SampleBatch b{1, 2, {Point{1, 0}, Point{2, 0}, Point{3, 0}}, {1, 2, 3, 4, 5, 6}};
    const std::vector<std::size_t> idx{2, 0};
    const auto s = select_points(b, idx);
    CHECK(s.values == std::vector<double>{3, 1, 6, 4});
    CHECK(s.points == std::vector<Point>{{3, 0}, {1, 0}});
    const std::vector<std::size_t> bad{3};
    CHECK_THROWS_AS(select_points(b, bad), IndexError);
  }
}
