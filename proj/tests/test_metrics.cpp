#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "treefield/error.hpp"
#include "treefield/metrics.hpp"
#include "treefield/reference.hpp"

using namespace treefield;

namespace {

const MetricKind kRadial = MetricKind::radial();
const MetricKind kRiver = MetricKind::river();

bool identities_hold(const MetricKind& k, const Point& a, const Point& b, const Point& c,
                     const Point& o) {
  return median_defect(k, a, b, c, o) <= median_band(k, a, b, c) &&
         segment_contains(k, a, b, o) && segment_contains(k, b, c, o) &&
         segment_contains(k, a, c, o);
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("radial distance") {
    CHECK(radial_distance(Point{1, 0}, Point{3, 0}) == 2.0);
    CHECK(radial_distance(Point{1, 0}, Point{0, 1}) == 2.0);
    CHECK(radial_distance(Point{1, 0}, Point{-2, 0}) == 3.0);
    CHECK(radial_distance(Point{1, 2, 2}, Point{2, 4, 4}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(radial_distance(Point{1, 0}, Point{1}), DimensionError);
  }

  TEST_CASE("river distance") {
    CHECK(river_distance(Point{1, 2}, Point{1, 5}) == 3.0);
    CHECK(river_distance(Point{1, 2}, Point{3, -1}) == 5.0);
    CHECK(river_distance(Point{0, 0}, Point{-4, 7}) == 11.0);
    CHECK_THROWS_AS(river_distance(Point{1, 2, 3}, Point{1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(kRiver.require_dim(3), DimensionError);
  }

  TEST_CASE("parametric families") {
    const auto p15 = MetricKind::parametric(BaseMetric::Radial, PowerFamily{1.5});
    CHECK(distance(p15, Point{1, 0}, Point{0, 1}) == doctest::Approx(2.0));
    CHECK(distance(p15, Point{4, 0}, Point{0, 0}) == doctest::Approx(8.0));
    const auto lin2 = MetricKind::parametric(BaseMetric::River, LinearFamily{2.0});
    CHECK(distance(lin2, Point{1, 2}, Point{3, -1}) == 10.0);
    CHECK_FALSE(lin2.is_normalized());
    CHECK(p15.is_normalized());
    CHECK_THROWS(MetricKind::parametric(BaseMetric::Radial, PowerFamily{0.0}));
    CHECK_THROWS(MetricKind::parametric(BaseMetric::Radial, LinearFamily{-1.0}));
  }

  TEST_CASE("metric kind parsing") {
    CHECK(MetricKind::parse("radial").base() == BaseMetric::Radial);
    CHECK(MetricKind::parse("river").base() == BaseMetric::River);
    CHECK(MetricKind::parse("euclidean").base() == BaseMetric::Euclidean);
    const auto k = MetricKind::parse("river:power:2");
    CHECK(k.is_parametric());
    CHECK(MetricKind::parse(k.name()).name() == k.name());
    CHECK_THROWS(MetricKind::parse("manhattan"));
    CHECK_THROWS(MetricKind::parse("radial:cubic:2"));
    CHECK_THROWS(MetricKind::parse("radial:power"));
    CHECK_THROWS(MetricKind::parse("radial:power:x"));
  }

  TEST_CASE("power p = 1 coincides with the base metric") {
    std::mt19937_64 g(3);
    const auto p1r = MetricKind::parametric(BaseMetric::Radial, PowerFamily{1.0});
    const auto p1v = MetricKind::parametric(BaseMetric::River, PowerFamily{1.0});
    for (int i = 0; i < 2000; ++i) {
      const Point a = oracle::random_radial_point(g), b = oracle::random_radial_point(g);
      CHECK(distance(p1r, a, b) == radial_distance(a, b));
      const Point c = oracle::random_river_point(g), d = oracle::random_river_point(g);
      CHECK(distance(p1v, c, d) == river_distance(c, d));
    }
  }

  TEST_CASE("segment membership") {
    CHECK(segment_contains(kRadial, Point{0, 5}, Point{5, 0}, Point{0, 0}));
    CHECK(segment_contains(kRadial, Point{1, 0}, Point{3, 0}, Point{2, 0}));
    CHECK(segment_contains(kRiver, Point{1, 2}, Point{3, 1}, Point{2, 0}));
    CHECK_FALSE(segment_contains(kRadial, Point{1, 0}, Point{3, 0}, Point{4, 0}));
    CHECK_FALSE(segment_contains(kRiver, Point{1, 2}, Point{3, 1}, Point{2, 1}));
  }

  TEST_CASE("gromov median examples") {
    // Oracle: grid minimizer of the distance sum, step 0.25 on [-3, 6]^2.
    auto d1 = [](const Point& x, const Point& y) { return radial_distance(x, y); };
    auto d2 = [](const Point& x, const Point& y) { return river_distance(x, y); };
    CHECK(oracle::grid_median(d1, Point{1, 0}, Point{2, 0}, Point{0, 1}, -3, 6, 0.25) == Point{1, 0});
    CHECK(oracle::grid_median(d1, Point{0, 1}, Point{0, 3}, Point{1, 0}, -3, 6, 0.25) == Point{0, 1});
    CHECK(oracle::grid_median(d2, Point{1, 2}, Point{1, 5}, Point{4, 1}, -3, 6, 0.25) == Point{1, 2});

    CHECK(gromov_median(kRadial, Point{1, 0}, Point{2, 0}, Point{0, 1}) == Point{1, 0});
    CHECK(gromov_median(kRadial, Point{0, 1}, Point{0, 3}, Point{1, 0}) == Point{0, 1});
    CHECK(gromov_median(kRiver, Point{1, 2}, Point{1, 5}, Point{4, 1}) == Point{1, 2});
    CHECK(gromov_median(kRiver, Point{1, 2}, Point{3, 1}, Point{-2, 4}) == Point{1, 0});
    CHECK(gromov_median(kRiver, Point{1, 2}, Point{1, -3}, Point{4, 1}) == Point{1, 0});
    CHECK(gromov_median(kRadial, Point{1, 0}, Point{0, 1}, Point{-1, -1}) == Point{0, 0});
  }

  TEST_CASE("euclidean triples have no median") {
    CHECK_THROWS_AS(gromov_median(MetricKind::euclidean(), Point{0, 0}, Point{1, 0}, Point{0, 1}),
                    MedianError);
    // Collinear Euclidean triples do have one: the middle point.
    CHECK(gromov_median(MetricKind::euclidean(), Point{0, 0}, Point{2, 0}, Point{1, 0}) == Point{1, 0});
  }

  TEST_CASE("random medians satisfy the identities and agree with the oracle grid") {
    std::mt19937_64 g(17);
    std::uniform_int_distribution<int> c(-3, 3);
    auto d1 = [](const Point& x, const Point& y) { return radial_distance(x, y); };
    auto d2 = [](const Point& x, const Point& y) { return river_distance(x, y); };
    for (int i = 0; i < 40; ++i) {
      // Integer points keep the median on the oracle grid.
      const Point a{double(c(g)), double(c(g))}, b{double(c(g)), double(c(g))},
          e{double(c(g)), double(c(g))};
      const Point o2 = gromov_median(kRiver, a, b, e);
      CHECK(identities_hold(kRiver, a, b, e, o2));
      const Point g2 = oracle::grid_median(d2, a, b, e, -3, 3, 0.5);
      CHECK(river_distance(o2, a) + river_distance(o2, b) + river_distance(o2, e) ==
            doctest::Approx(d2(g2, a) + d2(g2, b) + d2(g2, e)));
      const Point o1 = gromov_median(kRadial, a, b, e);
      CHECK(identities_hold(kRadial, a, b, e, o1));
      const Point g1 = oracle::grid_median(d1, a, b, e, -3, 3, 0.5);
      CHECK(radial_distance(o1, a) + radial_distance(o1, b) + radial_distance(o1, e) ==
            doctest::Approx(d1(g1, a) + d1(g1, b) + d1(g1, e)));
    }
  }

  TEST_CASE("metric axioms on random triples") {
    std::mt19937_64 g(23);
    const Tolerance tol;
    int checked = 0;
    for (int i = 0; i < 100000; ++i) {
      const bool river = i % 2 == 1;
      const auto& k = river ? kRiver : kRadial;
      auto draw = [&] {
        return river ? oracle::random_river_point(g) : oracle::random_radial_point(g);
      };
      const Point a = draw(), b = draw(), c = draw();
      const double ab = distance(k, a, b), ba = distance(k, b, a), ac = distance(k, a, c),
                   cb = distance(k, c, b);
      if (ab != ba || ab < 0 || distance(k, a, a) != 0.0 || ab > ac + cb + tol.band(ac + cb)) {
        FAIL("axiom broken");
      }
      if (!river && ab > a.norm() + b.norm() + tol.band(a.norm() + b.norm())) FAIL("radial bound");
      if (!river && !collinear_through_origin(a, b) && ab != a.norm() + b.norm()) FAIL("radial branch");
      ++checked;
    }
    CHECK(checked == 100000);
  }

  TEST_CASE("distances match an explicit tree graph") {
    std::mt19937_64 g(29);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<Point> r, v;
      for (int i = 0; i < 15; ++i) {
        r.push_back(oracle::random_radial_point(g));
        v.push_back(oracle::random_river_point(g));
      }
      const auto dr = oracle::radial_graph_distances(r);
      const auto dv = oracle::river_graph_distances(v);
      const auto mr = distance_matrix(kRadial, r);
      const auto mv = distance_matrix(kRiver, v);
      for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = 0; j < r.size(); ++j) {
          CHECK(mr(i, j) == doctest::Approx(dr[i][j]).epsilon(1e-12).scale(1.0));
          CHECK(mv(i, j) == doctest::Approx(dv[i][j]).epsilon(1e-12).scale(1.0));
        }
      }
    }
  }

  TEST_CASE("distance matrix examples and validation") {
    auto m = distance_matrix(kRadial, std::vector<Point>{{1, 0}, {2, 0}});
    CHECK(m(0, 1) == 1.0);
    CHECK(m(1, 0) == 1.0);
    m = distance_matrix(kRadial, std::vector<Point>{{1, 0}, {0, 1}});
    CHECK(m(0, 1) == 2.0);
    m = distance_matrix(kRiver, std::vector<Point>{{0, 0}, {1, 1}});
    CHECK(m(0, 1) == 2.0);
    CHECK(m(0, 0) == 0.0);
    CHECK_THROWS_AS(distance_matrix(kRadial, std::vector<Point>{{1, 0}, {1, 0, 0}}), DimensionError);
    CHECK_THROWS_AS(distance_matrix(kRadial, std::vector<Point>{}), DimensionError);
    CHECK_THROWS(DistanceMatrix::from_rows({{0, 1}, {2, 0}}));
    CHECK_THROWS(DistanceMatrix::from_rows({{1, 1}, {1, 0}}));
    CHECK_THROWS(DistanceMatrix::from_rows({{0, -1}, {-1, 0}}));
    CHECK_THROWS(DistanceMatrix::from_rows({{0, 1}, {1}}));
    CHECK(DistanceMatrix::from_rows({{0, 1}, {1, 0}})(1, 0) == 1.0);
  }

  TEST_CASE("parallel distance matrix equals the serial reference bitwise") {
    std::mt19937_64 g(31);
    std::vector<Point> pts;
    for (int i = 0; i < 300; ++i) pts.push_back(oracle::random_river_point(g));
    for (const auto& k : {kRadial, kRiver, MetricKind::euclidean()}) {
      const auto a = distance_matrix(k, pts);
      const auto b = reference::distance_matrix(k, pts);
      CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
    }
  }
}
