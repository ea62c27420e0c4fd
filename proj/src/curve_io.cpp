#include "curve_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace ccdf {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

void write_curve_csv(std::ostream& out, const ClosedCurve& curve) {
  out << "x,px,py\n";
  const int n = curve.size();
  char buf[128];
  for (int j = 0; j < n; ++j) {
    const double x = 2.0 * std::numbers::pi * j / n;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", x, curve[j].real(), curve[j].imag());
    out << buf;
  }
}

void write_curve_csv(const std::string& path, const ClosedCurve& curve) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
  write_curve_csv(out, curve);
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

ClosedCurve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,px,py") fail(ErrorKind::io, "curve CSV must start with header x,px,py");
  std::vector<double> xs;
  std::vector<Point> pts;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    double v[3];
    char sep = 0;
    if (!(ls >> v[0] >> sep) || sep != ',' || !(ls >> v[1] >> sep) || sep != ',' || !(ls >> v[2])) {
      fail(ErrorKind::io, "malformed curve CSV row " + std::to_string(row));
    }
    xs.push_back(v[0]);
    pts.emplace_back(v[1], v[2]);
  }
  const size_t n = xs.size();
  for (size_t j = 0; j < n; ++j) {
    const double expected = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    if (std::abs(xs[j] - expected) > 1e-9) {
      std::ostringstream os;
      os << "curve CSV parameter grid is not uniform at row " << j + 2 << " (x = " << xs[j] << ", expected " << expected << ")";
      fail(ErrorKind::io, os.str());
    }
  }
  return ClosedCurve(std::move(pts));
}

ClosedCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  return read_curve_csv(in);
}

}  // namespace ccdf
