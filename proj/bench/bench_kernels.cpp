// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "treefield/reference.hpp"
#include "treefield/verify.hpp"

namespace tf = treefield;

namespace {

std::vector<tf::Point> river_points(std::size_t n) {
  std::mt19937_64 g(7);
  std::uniform_int_distribution<int> col(-6, 6);
  std::uniform_real_distribution<double> y(-9, 9);
  std::vector<tf::Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(tf::Point{double(col(g)), y(g)});
  return pts;
}

const tf::MetricKind kRiver = tf::MetricKind::river();

void BM_distance_matrix(benchmark::State& st) {
  const auto pts = river_points(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(tf::distance_matrix(kRiver, pts));
}
void BM_distance_matrix_serial(benchmark::State& st) {
  const auto pts = river_points(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(tf::reference::distance_matrix(kRiver, pts));
}

void BM_four_point_scan(benchmark::State& st) {
  const auto dm = tf::distance_matrix(kRiver, river_points(static_cast<std::size_t>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(tf::is_tree_metric(dm));
}
void BM_four_point_scan_serial(benchmark::State& st) {
  const auto dm = tf::distance_matrix(kRiver, river_points(static_cast<std::size_t>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(tf::reference::is_tree_metric(dm));
}

void BM_simulate_river(benchmark::State& st) {
  const auto plan = tf::river_plan(tf::river_closure(river_points(20)));
  for (auto _ : st) benchmark::DoNotOptimize(tf::simulate_river(plan, 1, static_cast<std::size_t>(st.range(0))));
}
void BM_simulate_river_serial(benchmark::State& st) {
  const auto plan = tf::river_plan(tf::river_closure(river_points(20)));
  for (auto _ : st)
    benchmark::DoNotOptimize(tf::reference::simulate_river(plan, 1, static_cast<std::size_t>(st.range(0))));
}

void BM_sample_exact(benchmark::State& st) {
  const auto pts = river_points(20);
  const auto f = tf::cholesky_psd(tf::covariance_matrix(kRiver, tf::Point{0, 0}, pts));
  for (auto _ : st) benchmark::DoNotOptimize(tf::sample_exact(f, pts, 1, static_cast<std::size_t>(st.range(0))));
}
void BM_sample_exact_serial(benchmark::State& st) {
  const auto pts = river_points(20);
  const auto f = tf::cholesky_psd(tf::covariance_matrix(kRiver, tf::Point{0, 0}, pts));
  for (auto _ : st)
    benchmark::DoNotOptimize(tf::reference::sample_exact(f, pts, 1, static_cast<std::size_t>(st.range(0))));
}

}  // namespace

BENCHMARK(BM_distance_matrix)->Arg(200)->Arg(1000);
BENCHMARK(BM_distance_matrix_serial)->Arg(200)->Arg(1000);
BENCHMARK(BM_four_point_scan)->Arg(24)->Arg(48);
BENCHMARK(BM_four_point_scan_serial)->Arg(24)->Arg(48);
BENCHMARK(BM_simulate_river)->Arg(20000);
BENCHMARK(BM_simulate_river_serial)->Arg(20000);
BENCHMARK(BM_sample_exact)->Arg(20000);
BENCHMARK(BM_sample_exact_serial)->Arg(20000);

BENCHMARK_MAIN();
