#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "treefield/error.hpp"
#include "treefield/gaussian_field.hpp"
#include "treefield/reference.hpp"

using namespace treefield;

namespace {

const MetricKind kRadial = MetricKind::radial();
const MetricKind kRiver = MetricKind::river();
const Point kO{0, 0};

SymMatrix sym(const std::vector<std::vector<double>>& rows) {
  SymMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::vector<std::vector<double>> rows_of(const SymMatrix& m) {
  std::vector<std::vector<double>> r(m.size(), std::vector<double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r[i][j] = m(i, j);
  return r;
}

void check_reconstructs(const CholeskyFactor& f, const SymMatrix& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) s += f(i, k) * f(j, k);
      CHECK(std::abs(s - c(i, j)) <= 1e-9 * (1 + std::abs(c(i, j))));
      if (j > i) CHECK(f(i, j) == 0.0);
    }
  }
}

}  // namespace

TEST_SUITE("gaussian_field") {
  TEST_CASE("tree covariance") {
    CHECK(tree_covariance(kRadial, kO, Point{1, 0}, Point{1, 0}) == 1.0);
    CHECK(tree_covariance(kRadial, kO, Point{1, 0}, Point{2, 0}) == 1.0);
    CHECK(tree_covariance(kRadial, kO, Point{1, 0}, Point{0, 1}) == 0.0);
  }

  TEST_CASE("covariance matrices") {
    auto c = covariance_matrix(kRadial, kO, std::vector<Point>{{1, 0}, {2, 0}});
    CHECK(rows_of(c.entries) == std::vector<std::vector<double>>{{1, 1}, {1, 2}});
    c = covariance_matrix(kRadial, kO, std::vector<Point>{{1, 0}, {0, 1}});
    CHECK(rows_of(c.entries) == std::vector<std::vector<double>>{{1, 0}, {0, 1}});
    c = covariance_matrix(kRiver, kO, std::vector<Point>{{2, 0}, {2, 3}});
    CHECK(rows_of(c.entries) == std::vector<std::vector<double>>{{2, 2}, {2, 5}});
    CHECK(c.root == kO);
    CHECK(c.points.size() == 2);
  }

  TEST_CASE("covariance from a bare distance matrix") {
    const std::vector<Point> pts{{0, 0}, {1, 0}, {2, 0}, {0, 3}};
    const auto dm = distance_matrix(kRadial, pts);
    const auto s = covariance_from_distances(dm, 0);
    const auto c = covariance_matrix(kRadial, kO, pts);
    CHECK(rows_of(s) == rows_of(c.entries));
    CHECK_THROWS_AS(covariance_from_distances(dm, 4), IndexError);
  }

  TEST_CASE("cholesky examples") {
    auto f = cholesky_psd(sym({{1, 0}, {0, 1}}), 1e-10);
    CHECK(f.lower == std::vector<double>{1, 0, 0, 1});
    CHECK(f.rank == 2);
    f = cholesky_psd(sym({{1, 1}, {1, 2}}), 1e-10);
    CHECK(f.lower == std::vector<double>{1, 0, 1, 1});
    // Repeated and root points give a rank-deficient factor.
    const std::vector<Point> pts{{0, 0}, {1, 0}, {1, 0}, {0, 2}};
    const auto cov = covariance_matrix(kRadial, kO, pts);
    f = cholesky_psd(cov);
    CHECK(f.rank == 2);
    check_reconstructs(f, cov.entries);
  }

  TEST_CASE("not of negative type") {
    // K_{2,3} path metric rooted at its first vertex.
    std::vector<std::vector<double>> rows(5, std::vector<double>(5, 0.0));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j) rows[i][j] = ((i < 2) == (j < 2)) ? 2.0 : 1.0;
    const auto s = covariance_from_distances(DistanceMatrix::from_rows(rows), 0);
    CHECK(oracle::min_eigenvalue(rows_of(s)) < -0.1);
    CHECK_THROWS_AS(cholesky_psd(s, default_pivot_tol(s)), NotPSD);
    // Cubed river distances.
    const auto p3 = MetricKind::parametric(BaseMetric::River, PowerFamily{3.0});
    const auto c = covariance_matrix(p3, kO, std::vector<Point>{{1, 0}, {2, 0}, {1, 1}});
    CHECK(oracle::min_eigenvalue(rows_of(c.entries)) < 0);
    try {
      cholesky_psd(c);
      FAIL("expected NotPSD");
    } catch (const NotPSD& e) {
      CHECK(e.index() < 3);
      CHECK(e.pivot() < 0);
    }
  }

  TEST_CASE("vanished pivot with a live column is rejected") {
    CHECK_THROWS_AS(cholesky_psd(sym({{0, 1}, {1, 1}}), 1e-10), NotPSD);
    CHECK_THROWS_AS(cholesky_psd(sym({{1, 2}, {2, 1}}), 1e-10), NotPSD);
  }

  TEST_CASE("negative type on random point sets") {
    std::mt19937_64 g(83);
    for (int rep = 0; rep < 30; ++rep) {
      std::vector<Point> r, v;
      for (int i = 0; i < 20; ++i) {
        r.push_back(oracle::random_radial_point(g));
        v.push_back(oracle::random_river_point(g));
      }
      for (const auto& [k, pts] : {std::pair{kRadial, r}, std::pair{kRiver, v}}) {
        const auto cov = covariance_matrix(k, kO, pts);
        CHECK(oracle::min_eigenvalue(rows_of(cov.entries)) > -1e-9 * cov.entries.max_diagonal());
        const auto f = cholesky_psd(cov);
        check_reconstructs(f, cov.entries);
      }
    }
  }

  TEST_CASE("replicate streams and exact sampling") {
    CHECK(replicate_stream(5, 3)() == replicate_stream(5, 3)());
    CHECK(replicate_stream(5, 3)() != replicate_stream(5, 4)());
    CHECK(replicate_stream(5, 3)() != replicate_stream(6, 3)());

    const std::vector<Point> pts{{1, 0}, {0, 1}};
    const auto id = cholesky_psd(sym({{1, 0}, {0, 1}}), 1e-10);
    const auto b = sample_exact(id, pts, 9, 4);
    CHECK(b.reps == 4);
    CHECK(b.values.size() == 8);
    auto gen = replicate_stream(9, 2);
    std::normal_distribution<double> n(0.0, 1.0);
    const double z0 = n(gen);
    CHECK(b(2, 0) == z0);

    const auto zero = cholesky_psd(sym({{0, 0}, {0, 0}}), 1e-10);
    CHECK(zero.rank == 0);
    const auto zb = sample_exact(zero, pts, 1, 50);
    CHECK(std::all_of(zb.values.begin(), zb.values.end(), [](double v) { return v == 0.0; }));
  }

  TEST_CASE("parallel kernels agree with the serial reference bitwise") {
    std::mt19937_64 g(89);
    std::vector<Point> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(oracle::random_river_point(g));
    const auto a = covariance_matrix(kRiver, kO, pts);
    const auto b = reference::covariance_matrix(kRiver, kO, pts);
    CHECK(std::equal(a.entries.data().begin(), a.entries.data().end(), b.entries.data().begin()));
    const auto f = cholesky_psd(a);
    const auto s1 = sample_exact(f, pts, 77, 3000);
    const auto s2 = reference::sample_exact(f, pts, 77, 3000);
    CHECK(s1.values == s2.values);
  }

  TEST_CASE("increment covariance") {
    const Point p1{1, 0}, p2{0, 1};
    CHECK(increment_covariance(kRadial, p1, p2, p1, p2) == radial_distance(p1, p2));
    CHECK(increment_covariance(kRadial, Point{0, 2}, Point{0, 1}, p1, p2) == 0.0);
    CHECK(increment_covariance(kRadial, Point{3, 3}, Point{3, 3}, p1, p2) == 0.0);
  }

  TEST_CASE("increment covariance is root invariant") {
    std::mt19937_64 g(97);
    for (const auto& k : {kRadial, kRiver}) {
      for (int i = 0; i < 300; ++i) {
        auto draw = [&] {
          return k.base() == BaseMetric::Radial ? oracle::random_radial_point(g)
                                                : oracle::random_river_point(g);
        };
        const Point x = draw(), y = draw(), p1 = draw(), p2 = draw();
        const double direct = increment_covariance(k, x, y, p1, p2);
        for (int r = 0; r < 3; ++r) {
          const Point o = draw();
          auto c = [&](const Point& a, const Point& b) { return tree_covariance(k, o, a, b); };
          const double expanded = c(x, p1) - c(x, p2) - c(y, p1) + c(y, p2);
          CHECK(direct == doctest::Approx(expanded).epsilon(1e-12).scale(10.0));
        }
      }
    }
  }

  TEST_CASE("F_B membership") {
    const Point p1{2, 0}, p2{1, 0};
    CHECK(f_b_member(kRadial, p1, p2, p2));
    CHECK(f_b_member(kRadial, p1, p2, Point{0, 5}));
    CHECK_FALSE(f_b_member(kRadial, p1, p2, Point{3, 0}));
  }

  TEST_CASE("F_B equals C_d, and increments inside C_d are uncorrelated") {
    std::mt19937_64 g(101);
    const auto probes = Grid{-10, 10, -10, 10, 21, 21}.nodes();
    for (const auto& k : {kRadial, kRiver}) {
      for (int i = 0; i < 40; ++i) {
        auto draw = [&] {
          return k.base() == BaseMetric::Radial ? oracle::random_radial_point(g)
                                                : oracle::random_river_point(g);
        };
        const Point p1 = draw(), p2 = i % 4 == 0 ? 0.3 * p1 : draw();
        std::vector<Point> inside;
        for (const Point& a : probes) {
          const auto fb = f_b_classify(k, p1, p2, a);
          const auto cd = cd_classify_def(k, p1, p2, a);
          if (fb != Membership::Boundary && cd != Membership::Boundary) CHECK(fb == cd);
          if (cd == Membership::Inside) inside.push_back(a);
        }
        for (std::size_t a = 0; a + 1 < inside.size(); a += 7) {
          const double c = increment_covariance(k, inside[a], inside[a + 1], p1, p2);
          CHECK(std::abs(c) <= Tolerance{}.band(distance(k, inside[a], p1)) * 4);
        }
      }
    }
  }
}
