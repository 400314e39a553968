#include "treefield/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace treefield {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIPPED";
  }
  return "?";
}

bool all_passed(std::span<const VerifyReport> reports) {
  return std::none_of(reports.begin(), reports.end(),
                      [](const VerifyReport& r) { return r.status == Status::Fail; });
}

SymMatrix empirical_covariance(const SampleBatch& batch) {
  const std::size_t n = batch.size();
  SymMatrix s(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < batch.reps; ++r) acc += batch(r, i) * batch(r, j);
      s(i, j) = acc / static_cast<double>(batch.reps);
      s(j, i) = s(i, j);
    }
  }
  return s;
}

VerifyReport mc_covariance_test(const SampleBatch& batch, const SymMatrix& theory, double z,
                                std::size_t min_reps) {
  VerifyReport rep{"mc_covariance", Status::Pass, 0.0, z, "", ""};
  if (batch.size() != theory.size()) {
    throw DimensionError("sample batch and covariance sizes differ");
  }
  if (batch.reps < min_reps) {
    rep.status = Status::Skipped;
    rep.note = "needs at least " + std::to_string(min_reps) + " replicates, got " +
               std::to_string(batch.reps);
    return rep;
  }
  const SymMatrix s = empirical_covariance(batch);
  const double reps = static_cast<double>(batch.reps);
  for (std::size_t i = 0; i < theory.size(); ++i) {
    for (std::size_t j = i; j < theory.size(); ++j) {
      const double se = std::sqrt((theory(i, i) * theory(j, j) + theory(i, j) * theory(i, j)) / reps);
      const double dev = std::abs(s(i, j) - theory(i, j));
      // A zero-variance entry must match exactly.
      const double score = se > 0.0 ? dev / se : (dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
      if (score > rep.max_deviation) {
        rep.max_deviation = score;
        if (score > z) {
          std::ostringstream w;
          w << "(" << i << "," << j << ") empirical=" << s(i, j) << " theory=" << theory(i, j)
            << " se=" << se;
          rep.witness = w.str();
        }
      }
    }
  }
  if (rep.max_deviation > z) rep.status = Status::Fail;
  std::ostringstream note;
  note << "max deviation in standard errors; threshold " << z << " SE";
  rep.note = note.str();
  return rep;
}

VerifyReport mc_covariance_test(const SampleBatch& batch, const CovMatrix& theory, double z,
                                std::size_t min_reps) {
  return mc_covariance_test(batch, theory.entries, z, min_reps);
}

VerifyReport compare_covariance(std::string check, const SymMatrix& got, const SymMatrix& want,
                                double abs_tol) {
  if (got.size() != want.size()) throw DimensionError("covariance sizes differ");
  VerifyReport rep{std::move(check), Status::Pass, 0.0, abs_tol, "", ""};
  for (std::size_t i = 0; i < got.size(); ++i) {
    for (std::size_t j = 0; j < got.size(); ++j) {
      const double dev = std::abs(got(i, j) - want(i, j));
      if (dev > rep.max_deviation) {
        rep.max_deviation = dev;
        if (dev > abs_tol) {
          std::ostringstream w;
          w << "(" << i << "," << j << ") got=" << got(i, j) << " want=" << want(i, j);
          rep.witness = w.str();
        }
      }
    }
  }
  if (rep.max_deviation > abs_tol) rep.status = Status::Fail;
  return rep;
}

VerifyReport radial_exactness(const RadialPlan& plan, const Tolerance& tol, double abs_tol) {
  const CovMatrix theory =
      covariance_matrix(MetricKind::radial(), Point::origin(2), plan.points, tol);
  return compare_covariance("induced_covariance", induced_covariance_radial(plan).entries,
                            theory.entries, abs_tol);
}

VerifyReport river_exactness(const RiverPlan& plan, const Tolerance& tol, double abs_tol) {
  const CovMatrix theory =
      covariance_matrix(MetricKind::river(), Point::origin(2), plan.labelled_points, tol);
  return compare_covariance("induced_covariance", induced_covariance_river(plan).entries,
                            theory.entries, abs_tol);
}

VerifyReport psd_report(const CovMatrix& cov) {
  VerifyReport rep{"cholesky_psd", Status::Pass, 0.0, default_pivot_tol(cov.entries), "", ""};
  try {
    const CholeskyFactor f = cholesky_psd(cov);
    rep.note = "rank " + std::to_string(f.rank) + " of " + std::to_string(f.n);
  } catch (const NotPSD& e) {
    rep.status = Status::Fail;
    rep.max_deviation = -e.pivot();
    rep.witness = "pivot " + std::to_string(e.pivot()) + " at index " + std::to_string(e.index());
  }
  return rep;
}

VerifyReport fb_cd_report(const MetricKind& kind, std::span<const Point> points,
                          std::span<const Point> probes, const Tolerance& tol) {
  VerifyReport rep{"fb_equals_cd", Status::Pass, 0.0, 0.0, "", ""};
  const std::size_t n = points.size();
  struct PairOutcome {
    std::size_t compared = 0, skipped = 0, mismatches = 0;
    std::string witness;
  };
  std::vector<PairOutcome> outcome(n * n);
  const auto sn = static_cast<std::ptrdiff_t>(n * n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t s = 0; s < sn; ++s) {
    const std::size_t i = static_cast<std::size_t>(s) / n;
    const std::size_t j = static_cast<std::size_t>(s) % n;
    if (i == j) continue;
    PairOutcome& out = outcome[static_cast<std::size_t>(s)];
    const CdRegion region = cd_region(kind, points[i], points[j], tol);
    for (const Point& a : probes) {
      const Membership fb = f_b_classify(kind, points[i], points[j], a, tol);
      const Membership closed = region_classify(region, a, tol);
      const Membership def = cd_classify_def(kind, points[i], points[j], a, tol);
      if (fb == Membership::Boundary || closed == Membership::Boundary ||
          def == Membership::Boundary) {
        ++out.skipped;
        continue;
      }
      ++out.compared;
      if (fb != closed || fb != def) {
        if (out.mismatches++ == 0) {
          std::ostringstream w;
          w << "pair (" << i << "," << j << ") probe (" << a[0] << "," << a[1] << ")";
          out.witness = w.str();
        }
      }
    }
  }
  std::size_t compared = 0, skipped = 0, mismatches = 0;
  for (const auto& o : outcome) {
    compared += o.compared;
    skipped += o.skipped;
    mismatches += o.mismatches;
    if (rep.witness.empty() && !o.witness.empty()) rep.witness = o.witness;
  }
  rep.max_deviation = static_cast<double>(mismatches);
  rep.status = mismatches == 0 ? Status::Pass : Status::Fail;
  rep.note = std::to_string(compared) + " compared, " + std::to_string(skipped) + " in band";
  return rep;
}

namespace {

std::vector<Point> probe_grid(std::span<const Point> points) {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
  for (const Point& p : points) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  Grid g{xmin - 1.0, xmax + 1.0, ymin - 1.0, ymax + 1.0, 21, 21};
  std::vector<Point> probes = g.nodes();
  probes.insert(probes.end(), points.begin(), points.end());
  return probes;
}

}  // namespace

std::vector<VerifyReport> verify_simulator(const MetricKind& kind, std::span<const Point> points,
                                           const VerifyOptions& opts) {
  if (kind.is_parametric() || kind.base() == BaseMetric::Euclidean) {
    throw std::invalid_argument("simulators exist for the radial and river metrics only");
  }
  kind.require_dim(require_uniform_dim(points));
  if (points.front().dim() != 2) throw DimensionError("simulators work in the plane");

  std::vector<VerifyReport> reports;
  std::vector<Point> pts;
  SampleBatch sim;
  VerifyReport exact;
  if (kind.base() == BaseMetric::Radial) {
    pts.assign(points.begin(), points.end());
    const RadialPlan plan = radial_plan(pts, opts.tol);
    exact = radial_exactness(plan, opts.tol, opts.exact_tol);
    sim = simulate_radial(plan, opts.seed, opts.reps);
  } else {
    pts = river_closure(points, opts.tol);
    const RiverPlan plan = river_plan(pts, opts.tol);
    exact = river_exactness(plan, opts.tol, opts.exact_tol);
    sim = simulate_river(plan, opts.seed, opts.reps);
  }
  reports.push_back(exact);

  const CovMatrix theory = covariance_matrix(kind, Point::origin(2), pts, opts.tol);
  reports.push_back(psd_report(theory));

  VerifyReport mc = mc_covariance_test(sim, theory);
  mc.check = "mc_covariance_simulator";
  reports.push_back(mc);

  if (reports[1].status == Status::Pass) {
    const CholeskyFactor f = cholesky_psd(theory);
    VerifyReport oracle = mc_covariance_test(sample_exact(f, pts, opts.seed, opts.reps), theory);
    oracle.check = "mc_covariance_cholesky";
    reports.push_back(oracle);
  }

  reports.push_back(fb_cd_report(kind, points, probe_grid(points), opts.tol));
  return reports;
}

}  // namespace treefield
