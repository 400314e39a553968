#include "treefield/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace treefield::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + std::string(s) +
                     "'");
  }
  return v;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::vector<Point> read_points_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<Point> points;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (dim == 0) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] != "x" + std::to_string(i + 1)) {
          throw ParseError("line " + std::to_string(line_no) + ": expected header x1,...,xn");
        }
      }
      dim = fields.size();
      continue;
    }
    if (fields.size() != dim) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                       " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> coords;
    coords.reserve(dim);
    for (auto f : fields) coords.push_back(to_double(f, line_no));
    try {
      points.emplace_back(std::move(coords));
    } catch (const InvalidPoint& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (dim == 0) throw ParseError("points file is empty");
  if (points.empty()) throw ParseError("points file has a header but no points");
  return points;
}

std::vector<Point> read_points_csv(const std::string& path) {
  auto in = open(path);
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, const std::vector<Point>& points) {
  if (points.empty()) return;
  for (std::size_t i = 0; i < points.front().dim(); ++i) out << (i ? ",x" : "x") << i + 1;
  out << '\n';
  for (const Point& p : points) {
    for (std::size_t i = 0; i < p.dim(); ++i) out << (i ? "," : "") << format_double(p[i]);
    out << '\n';
  }
}

DistanceMatrix read_matrix_csv(std::istream& in, const Tolerance& tol) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (auto f : split(line, ',')) row.push_back(to_double(f, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix file is empty");
  return DistanceMatrix::from_rows(rows, tol);
}

DistanceMatrix read_matrix_csv(const std::string& path, const Tolerance& tol) {
  auto in = open(path);
  return read_matrix_csv(in, tol);
}

void write_matrix_csv(std::ostream& out, const DistanceMatrix& dm) {
  for (std::size_t i = 0; i < dm.size(); ++i) {
    for (std::size_t j = 0; j < dm.size(); ++j) out << (j ? "," : "") << format_double(dm(i, j));
    out << '\n';
  }
}

void write_matrix_csv(std::ostream& out, const SymMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

void write_samples_csv(std::ostream& out, const SampleBatch& batch) {
  out << "rep,point_index,value\n";
  for (std::size_t r = 0; r < batch.reps; ++r) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      out << r << ',' << i << ',' << format_double(batch(r, i)) << '\n';
    }
  }
}

void write_grid_csv(std::ostream& out, const std::vector<Point>& nodes,
                    const std::vector<Membership>& mask) {
  out << "x,y,member\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << format_double(nodes[i][0]) << ',' << format_double(nodes[i][1]) << ','
        << membership_code(mask[i]) << '\n';
  }
}

void write_violation_csv(std::ostream& out, const std::vector<ViolationReport>& reports) {
  out << "kind,indices,slack\n";
  for (const auto& r : reports) {
    out << to_string(r.kind) << ',';
    for (std::size_t i = 0; i < r.witness.size(); ++i) out << (i ? " " : "") << r.witness[i];
    out << ',' << format_double(r.slack) << '\n';
  }
}

std::map<std::string, std::string> read_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(s.substr(0, eq));
    if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key");
    out[std::string(key)] = std::string(trim(s.substr(eq + 1)));
  }
  return out;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  auto in = open(path);
  return read_config(in);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (auto f : split(text, ',')) out.push_back(to_double(f, 0));
  return out;
}

}  // namespace treefield::io
