#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "treefield/gaussian_field.hpp"
#include "treefield/tree_bm_sim.hpp"

namespace treefield {

enum class Status { Pass, Fail, Skipped };

std::string to_string(Status s);

/// Outcome of one verification check. A failing report always carries a
/// witness describing the offending entry.
struct VerifyReport {
  std::string check;
  Status status = Status::Pass;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string witness;
  std::string note;
};

/// True when no report failed (skipped reports do not fail).
bool all_passed(std::span<const VerifyReport> reports);

/// Mean-zero estimator, divisor = reps. OpenMP-parallel over rows; see
/// reference::empirical_covariance.
SymMatrix empirical_covariance(const SampleBatch& batch);

/// Entrywise |S_ij - C_ij| <= z * sqrt((C_ii C_jj + C_ij^2) / reps). Reports
/// the largest deviation in standard errors. Skipped below `min_reps`.
VerifyReport mc_covariance_test(const SampleBatch& batch, const SymMatrix& theory, double z = 5.0,
                                std::size_t min_reps = 1000);
VerifyReport mc_covariance_test(const SampleBatch& batch, const CovMatrix& theory, double z = 5.0,
                                std::size_t min_reps = 1000);

/// Entrywise absolute comparison of two matrices of equal size.
VerifyReport compare_covariance(std::string check, const SymMatrix& got, const SymMatrix& want,
                                double abs_tol);

/// Plan-induced covariance against the tree covariance of the plan's points.
VerifyReport radial_exactness(const RadialPlan& plan, const Tolerance& tol = {},
                              double abs_tol = 1e-9);
VerifyReport river_exactness(const RiverPlan& plan, const Tolerance& tol = {},
                             double abs_tol = 1e-9);

/// cholesky_psd at the default pivot tolerance.
VerifyReport psd_report(const CovMatrix& cov);

/// F_B(p1|p2) membership against the closed-form C-set and the C-set
/// definition, for every ordered pair of distinct points and every probe.
/// Probes in a boundary band are skipped.
VerifyReport fb_cd_report(const MetricKind& kind, std::span<const Point> points,
                          std::span<const Point> probes, const Tolerance& tol = {});

struct VerifyOptions {
  Tolerance tol;
  std::uint64_t seed = 1;
  std::size_t reps = 200000;
  double exact_tol = 1e-9;
};

/// Runs the simulator checks for radial or river points: (a) plan-induced
/// covariance against the tree covariance, (b) positive semidefiniteness,
/// (c) Monte-Carlo covariance of the simulator and of the Cholesky oracle,
/// (d) F_B against C_d. River points are closed first.
std::vector<VerifyReport> verify_simulator(const MetricKind& kind, std::span<const Point> points,
                                           const VerifyOptions& opts);

}  // namespace treefield
