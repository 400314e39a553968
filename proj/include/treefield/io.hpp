#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "treefield/cd_sets.hpp"
#include "treefield/gaussian_field.hpp"
#include "treefield/metrics.hpp"
#include "treefield/tree_checks.hpp"

namespace treefield::io {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Header `x1,...,xn` then one point per line. Ragged rows, non-numeric
/// fields and files without points raise ParseError.
std::vector<Point> read_points_csv(std::istream& in);
std::vector<Point> read_points_csv(const std::string& path);
void write_points_csv(std::ostream& out, const std::vector<Point>& points);

/// n header-less rows of n comma-separated values.
DistanceMatrix read_matrix_csv(std::istream& in, const Tolerance& tol = {});
DistanceMatrix read_matrix_csv(const std::string& path, const Tolerance& tol = {});
void write_matrix_csv(std::ostream& out, const DistanceMatrix& dm);
void write_matrix_csv(std::ostream& out, const SymMatrix& m);

/// Header `rep,point_index,value`, one row per (replicate, point).
void write_samples_csv(std::ostream& out, const SampleBatch& batch);

/// Header `x,y,member`; member is 0, 1 or S (boundary band).
void write_grid_csv(std::ostream& out, const std::vector<Point>& nodes,
                    const std::vector<Membership>& mask);

/// Header `kind,indices,slack`; indices are space-separated.
void write_violation_csv(std::ostream& out, const std::vector<ViolationReport>& reports);

/// Flat `key = value` lines; `#` starts a comment.
std::map<std::string, std::string> read_config(std::istream& in);
std::map<std::string, std::string> read_config(const std::string& path);

/// "a,b,..." into doubles.
std::vector<double> parse_list(const std::string& text);

}  // namespace treefield::io
