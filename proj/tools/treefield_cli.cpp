// treefield command-line tool. Exit codes: 0 all checks pass, 1 a check
// failed, 2 bad input or configuration.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "treefield/cd_sets.hpp"
#include "treefield/io.hpp"
#include "treefield/tree_bm_sim.hpp"
#include "treefield/tree_checks.hpp"
#include "treefield/verify.hpp"

namespace tf = treefield;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;
constexpr std::size_t kCheckCap = 64;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raw option text as typed on the command line; merged with the config file
/// and the environment by `resolve`.
struct Flags {
  std::string config, metric, points, matrix, tol, grid, out, p1, p2, labelled_out;
  std::string seed, reps;
  bool by_definition = false;
  bool force = false;
};

struct RunConfig {
  std::string metric = "radial";
  tf::Tolerance tol;
  std::uint64_t seed = 1;
  std::size_t reps = 200000;
  tf::Grid grid;
  std::string points, matrix, out, p1, p2, labelled_out;
  bool by_definition = false;
  bool force = false;
};

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InputError(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

tf::Tolerance parse_tol(const std::string& text) {
  const auto v = tf::io::parse_list(text);
  if (v.size() == 1) return tf::Tolerance(v[0], v[0]);
  if (v.size() == 2) return tf::Tolerance(v[0], v[1]);
  throw InputError("tol: expected 'eps' or 'eps_abs,eps_rel'");
}

tf::Grid parse_grid(const std::string& text) {
  const auto v = tf::io::parse_list(text);
  if (v.size() != 5 && v.size() != 6) throw InputError("grid: expected xmin,xmax,ymin,ymax,n[,ny]");
  auto count = [](double c) {
    if (!(c >= 2.0) || c != static_cast<double>(static_cast<std::size_t>(c))) {
      throw InputError("grid: resolution must be an integer >= 2");
    }
    return static_cast<std::size_t>(c);
  };
  tf::Grid g{v[0], v[1], v[2], v[3], count(v[4]), count(v.size() == 6 ? v[5] : v[4])};
  if (!(g.xmin < g.xmax) || !(g.ymin < g.ymax)) throw InputError("grid: extents need min < max");
  return g;
}

tf::Point parse_point(const std::string& key, const std::string& text) {
  if (text.empty()) throw InputError("missing --" + key);
  return tf::Point(tf::io::parse_list(text));
}

RunConfig resolve(const Flags& f) {
  std::map<std::string, std::string> kv;
  if (!f.config.empty()) kv = tf::io::read_config(f.config);
  static const std::set<std::string> known{"metric", "tol", "seed", "reps", "grid", "points",
                                           "matrix", "out", "p1", "p2", "labelled_out"};
  for (const auto& [k, v] : kv) {
    if (!known.contains(k)) throw InputError("config: unknown key '" + k + "'");
  }
  if (const char* e = std::getenv("TREEFIELD_SEED")) kv["seed"] = e;
  if (const char* e = std::getenv("TREEFIELD_TOL")) kv["tol"] = e;
  auto take = [&](const char* key, const std::string& flag) {
    if (!flag.empty()) kv[key] = flag;
  };
  take("metric", f.metric);
  take("tol", f.tol);
  take("seed", f.seed);
  take("reps", f.reps);
  take("grid", f.grid);
  take("points", f.points);
  take("matrix", f.matrix);
  take("out", f.out);
  take("p1", f.p1);
  take("p2", f.p2);
  take("labelled_out", f.labelled_out);

  RunConfig c;
  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("metric")) c.metric = *v;
  if (auto v = get("tol")) c.tol = parse_tol(*v);
  if (auto v = get("seed")) c.seed = parse_u64("seed", *v);
  if (auto v = get("reps")) {
    c.reps = parse_u64("reps", *v);
    if (c.reps < 1) throw InputError("reps must be >= 1");
  }
  if (auto v = get("grid")) c.grid = parse_grid(*v);
  c.points = get("points").value_or("");
  c.matrix = get("matrix").value_or("");
  c.out = get("out").value_or("");
  c.p1 = get("p1").value_or("");
  c.p2 = get("p2").value_or("");
  c.labelled_out = get("labelled_out").value_or("");
  c.by_definition = f.by_definition;
  c.force = f.force;
  return c;
}

std::vector<tf::Point> load_points(const RunConfig& c) {
  if (c.points.empty()) throw InputError("missing --points");
  return tf::io::read_points_csv(c.points);
}

/// Writes through `body` to --out, or to stdout when no path is set.
template <class Body>
void emit(const std::string& path, Body body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  body(out);
}

std::string witness_text(const std::vector<std::size_t>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + std::to_string(w[i]);
  return s;
}

int cmd_metric_eval(const RunConfig& c) {
  const auto kind = tf::MetricKind::parse(c.metric);
  const auto pts = load_points(c);
  kind.require_dim(tf::require_uniform_dim(pts));
  const auto dm = tf::distance_matrix(kind, pts, c.tol);
  emit(c.out, [&](std::ostream& os) { tf::io::write_matrix_csv(os, dm); });
  return kPass;
}

void print_check(const std::string& name, const tf::CheckResult& r, bool informational) {
  std::cout << name << ": " << (r.passed() ? "PASS" : (informational ? "NO" : "FAIL"));
  if (r.violation) {
    std::cout << " kind=" << tf::to_string(r.violation->kind) << " witness=["
              << witness_text(r.violation->witness) << "] slack="
              << tf::io::format_double(r.violation->slack);
  }
  std::cout << '\n';
}

int cmd_check(const RunConfig& c) {
  if (c.points.empty() == c.matrix.empty()) throw InputError("give exactly one of --points or --matrix");
  std::optional<tf::MetricKind> kind;
  std::vector<tf::Point> pts;
  tf::DistanceMatrix dm;
  if (!c.points.empty()) {
    kind = tf::MetricKind::parse(c.metric);
    pts = load_points(c);
    kind->require_dim(tf::require_uniform_dim(pts));
  }
  const std::size_t n = pts.empty() ? 0 : pts.size();
  if (!pts.empty() && n > kCheckCap && !c.force) {
    throw InputError(std::to_string(n) + " points exceed the cap of " + std::to_string(kCheckCap) +
                     " for exhaustive checks; pass --force to run anyway");
  }
  if (pts.empty()) {
    dm = tf::io::read_matrix_csv(c.matrix, c.tol);
    if (dm.size() > kCheckCap && !c.force) {
      throw InputError(std::to_string(dm.size()) + " points exceed the cap of " +
                       std::to_string(kCheckCap) + " for exhaustive checks; pass --force to run anyway");
    }
  } else {
    dm = tf::distance_matrix(*kind, pts, c.tol);
  }

  std::vector<tf::ViolationReport> violations;
  const auto tree = tf::is_tree_metric(dm, c.tol);
  print_check("tree_metric", tree, false);
  if (tree.violation) violations.push_back(*tree.violation);
  const auto ultra = tf::is_ultrametric(dm, c.tol);
  print_check("ultrametric", ultra, true);
  bool ok = tree.passed();
  if (kind) {
    const auto cb = tf::check_condition_B(*kind, pts, c.tol);
    print_check("condition_B", cb, false);
    if (cb.violation) violations.push_back(*cb.violation);
    ok = ok && cb.passed();
  }
  if (!c.out.empty()) emit(c.out, [&](std::ostream& os) { tf::io::write_violation_csv(os, violations); });
  return ok ? kPass : kFail;
}

int cmd_cdset_grid(const RunConfig& c) {
  const auto kind = tf::MetricKind::parse(c.metric);
  if (kind.base() == tf::BaseMetric::Euclidean) throw InputError("cdset grid needs a radial or river metric");
  const tf::Point p1 = parse_point("p1", c.p1);
  const tf::Point p2 = parse_point("p2", c.p2);
  if (p1.dim() != 2 || p2.dim() != 2) throw InputError("cdset grid works in the plane; points need 2 coordinates");
  const auto nodes = c.grid.nodes();
  const auto mask = tf::cd_grid_mask(kind, p1, p2, nodes, c.by_definition, c.tol);
  emit(c.out, [&](std::ostream& os) { tf::io::write_grid_csv(os, nodes, mask); });
  return kPass;
}

void require_simulable(const tf::MetricKind& kind) {
  if (kind.is_parametric() || kind.base() == tf::BaseMetric::Euclidean) {
    throw InputError("simulators exist for the radial and river metrics only");
  }
}

int cmd_simulate(const RunConfig& c) {
  const auto kind = tf::MetricKind::parse(c.metric);
  require_simulable(kind);
  const auto pts = load_points(c);
  if (tf::require_uniform_dim(pts) != 2) throw InputError("simulators work in the plane");
  tf::SampleBatch batch;
  if (kind.base() == tf::BaseMetric::Radial) {
    batch = tf::simulate_radial(tf::radial_plan(pts, c.tol), c.seed, c.reps);
  } else {
    const auto closure = tf::river_closure(pts, c.tol);
    const auto plan = tf::river_plan(closure, c.tol);
    const auto full = tf::simulate_river(plan, c.seed, c.reps);
    batch = tf::select_points(full, tf::closure_index(plan.labelled_points, pts, c.tol));
    if (!c.labelled_out.empty()) {
      emit(c.labelled_out, [&](std::ostream& os) { tf::io::write_points_csv(os, plan.labelled_points); });
    }
  }
  emit(c.out, [&](std::ostream& os) { tf::io::write_samples_csv(os, batch); });
  return kPass;
}

int cmd_verify(const RunConfig& c) {
  const auto kind = tf::MetricKind::parse(c.metric);
  require_simulable(kind);
  const auto pts = load_points(c);
  if (tf::require_uniform_dim(pts) != 2) throw InputError("simulators work in the plane");
  tf::VerifyOptions opts;
  opts.tol = c.tol;
  opts.seed = c.seed;
  opts.reps = c.reps;
  const auto reports = tf::verify_simulator(kind, pts, opts);
  std::ostringstream text;
  for (const auto& r : reports) {
    text << r.check << ": " << tf::to_string(r.status)
         << " max_deviation=" << tf::io::format_double(r.max_deviation)
         << " tolerance=" << tf::io::format_double(r.tolerance);
    if (!r.witness.empty()) text << " witness=" << r.witness;
    if (!r.note.empty()) text << " (" << r.note << ")";
    text << '\n';
  }
  std::cout << text.str();
  if (!c.out.empty()) emit(c.out, [&](std::ostream& os) { os << text.str(); });
  return tf::all_passed(reports) ? kPass : kFail;
}

int cmd_identify(const RunConfig& c) {
  const auto kind = tf::MetricKind::parse(c.metric);
  if (kind.base() == tf::BaseMetric::Euclidean) throw InputError("identify needs a radial or river base metric");
  const auto pts = load_points(c);
  kind.require_dim(tf::require_uniform_dim(pts));
  if (pts.size() < 2) throw InputError("identify needs at least two points");

  std::vector<std::pair<tf::Point, tf::Point>> pairs;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i != j) pairs.emplace_back(pts[i], pts[j]);
    }
  }
  std::vector<tf::Point> probes = pts;
  if (pts.front().dim() == 2) {
    const auto nodes = c.grid.nodes();
    probes.insert(probes.end(), nodes.begin(), nodes.end());
  }
  const auto scan = tf::cd_equivalence_scan(kind, pairs, probes, c.tol);

  // Sample the branch-length transform at the base distances of the input.
  const tf::MetricKind base = kind.base() == tf::BaseMetric::Radial ? tf::MetricKind::radial()
                                                                     : tf::MetricKind::river();
  std::vector<std::pair<double, double>> samples;
  double umax = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double u = tf::distance(base, pts[i], pts[j], c.tol);
      if (u > c.tol.eps_abs()) {
        const double v = kind.family() ? tf::apply_family(*kind.family(), u) : u;
        samples.emplace_back(u, v);
        umax = std::max(umax, u);
      }
    }
  }
  if (samples.size() < 2) throw InputError("identify needs at least two distinct positive distances");
  const auto fit = tf::cauchy_fit(samples);
  const bool linear = fit.max_residual <= c.tol.band(fit.c * umax);

  std::cout << "metric: " << kind.name() << '\n'
            << "cd_equivalence: " << (scan.mismatches.empty() ? "PASS" : "FAIL")
            << " mismatches=" << scan.mismatches.size() << " compared=" << scan.compared
            << " skipped=" << scan.skipped << '\n';
  if (!scan.mismatches.empty()) {
    const auto& m = scan.mismatches.front();
    std::cout << "  first mismatch: pair " << m.pair_index << " probe " << m.probe_index
              << " definition=" << m.def_member << " closed_form=" << m.region_member << '\n';
  }
  std::cout << "cauchy_fit: " << (linear ? "PASS" : "FAIL") << " c=" << tf::io::format_double(fit.c)
            << " max_residual=" << tf::io::format_double(fit.max_residual) << '\n'
            << "normalized: " << (kind.is_normalized() ? "yes" : "no") << '\n';
  return scan.mismatches.empty() && linear ? kPass : kFail;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "key = value configuration file");
  sub->add_option("--metric", f.metric, "radial | river | euclidean [:power:p | :linear:c]");
  sub->add_option("--tol", f.tol, "eps, or eps_abs,eps_rel (each <= 1e-3)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-metric checks, C-sets and tree-indexed Brownian motion simulation"};
  app.require_subcommand(1);
  Flags f;

  auto* metric = app.add_subcommand("metric", "Metric evaluation");
  metric->require_subcommand(1);
  auto* eval = metric->add_subcommand("eval", "Pairwise distance matrix of a point file");
  add_common(eval, f);
  eval->add_option("--points", f.points, "points CSV");
  eval->add_option("--out", f.out, "output CSV (default stdout)");

  auto* check = app.add_subcommand("check", "Tree-metric, ultrametric and median checks");
  add_common(check, f);
  check->add_option("--points", f.points, "points CSV");
  check->add_option("--matrix", f.matrix, "distance matrix CSV");
  check->add_option("--out", f.out, "violation CSV");
  check->add_flag("--force", f.force, "lift the point-count cap");

  auto* cdset = app.add_subcommand("cdset", "C-set regions");
  cdset->require_subcommand(1);
  auto* grid = cdset->add_subcommand("grid", "C-set membership mask over a grid");
  add_common(grid, f);
  grid->add_option("--p1", f.p1, "x,y");
  grid->add_option("--p2", f.p2, "x,y");
  grid->add_option("--grid", f.grid, "xmin,xmax,ymin,ymax,n[,ny]");
  grid->add_option("--out", f.out, "grid CSV (default stdout)");
  grid->add_flag("--by-definition", f.by_definition, "use the distance identity instead of the closed form");

  auto* simulate = app.add_subcommand("simulate", "Sample tree-indexed Brownian motion");
  add_common(simulate, f);
  simulate->add_option("--points", f.points, "points CSV");
  simulate->add_option("--seed", f.seed, "RNG seed");
  simulate->add_option("--reps", f.reps, "replicates");
  simulate->add_option("--out", f.out, "samples CSV (default stdout)");
  simulate->add_option("--labelled-out", f.labelled_out, "closed river point set CSV");

  auto* verify = app.add_subcommand("verify", "Deterministic and Monte-Carlo simulator checks");
  add_common(verify, f);
  verify->add_option("--points", f.points, "points CSV");
  verify->add_option("--seed", f.seed, "RNG seed");
  verify->add_option("--reps", f.reps, "replicates");
  verify->add_option("--out", f.out, "report text file");

  auto* identify = app.add_subcommand("identify", "C-set scan and Cauchy fit for a parametric metric");
  add_common(identify, f);
  identify->add_option("--points", f.points, "points CSV");
  identify->add_option("--grid", f.grid, "probe grid xmin,xmax,ymin,ymax,n[,ny]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kPass : kInputError;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kPass : kInputError;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    const RunConfig c = resolve(f);
    if (*eval) return cmd_metric_eval(c);
    if (*check) return cmd_check(c);
    if (*grid) return cmd_cdset_grid(c);
    if (*simulate) return cmd_simulate(c);
    if (*verify) return cmd_verify(c);
    if (*identify) return cmd_identify(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
