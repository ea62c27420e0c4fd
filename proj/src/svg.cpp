#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "error.hpp"

namespace ccdf {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", std::abs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" viewBox=\"0 0 " +
         num(w) + " " + num(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle", int size = 12) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

// Closed polyline of the curve mapped into the box [x0, x0+size] x [y0, y0+size].
std::string curve_path(const ClosedCurve& curve, double x0, double y0, double size, double margin) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : curve.points()) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double scale = span > 0.0 ? (size - 2.0 * margin) / span : 1.0;
  const double cx = 0.5 * (xmin + xmax);
  const double cy = 0.5 * (ymin + ymax);
  std::string d = "<path fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" d=\"";
  const int n = curve.size();
  for (int i = 0; i <= n; ++i) {
    const Point p = curve[i % n];
    const double x = x0 + 0.5 * size + (p.real() - cx) * scale;
    const double y = y0 + 0.5 * size - (p.imag() - cy) * scale;
    d += (i == 0 ? "M" : " L") + num(x) + " " + num(y);
  }
  return d + " Z\"/>\n";
}

std::string format_c(double c) {
  if (std::abs(c - 1.0 / 9.0) < 1e-12) return "1/9";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", c);
  return buf;
}

}  // namespace

std::string curve_gallery_svg(const std::vector<LabelledCurve>& curves, double cell) {
  const double label_h = 24.0;
  const double w = cell * std::max<size_t>(curves.size(), 1);
  std::string out = header(w, cell + label_h);
  for (size_t i = 0; i < curves.size(); ++i) {
    out += curve_path(curves[i].curve, cell * i, 0.0, cell, 12.0);
    out += text(cell * i + 0.5 * cell, cell + 16.0, curves[i].label);
  }
  return out + "</svg>\n";
}

std::string stability_region_svg(const StabilityGrid& grid, const RegionStyle& style) {
  const double left = 56.0, right = 20.0, top = style.title.empty() ? 16.0 : 36.0, bottom = 44.0;
  const int rows = static_cast<int>(grid.rows.size());
  const double plot_w = style.width - left - right;
  const double plot_h = style.row_height * std::max(rows, 1);
  const double height = top + plot_h + bottom;
  const double c0 = grid.c_values.front();
  const double c1 = grid.c_values.back();
  auto xc = [&](double c) { return left + (c - c0) / (c1 - c0) * plot_w; };
  auto yrow = [&](int omega) { return top + plot_h - (omega - 0.5) * style.row_height; };

  std::string out = header(style.width, height);
  if (!style.title.empty()) out += text(style.width / 2.0, 22.0, style.title, "middle", 14);
  out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(plot_w) + "\" height=\"" + num(plot_h) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.8\"/>\n";

  for (double g : style.guides) {
    if (g < c0 || g > c1) continue;
    out += "<line x1=\"" + num(xc(g)) + "\" y1=\"" + num(top) + "\" x2=\"" + num(xc(g)) + "\" y2=\"" + num(top + plot_h) +
           "\" stroke=\"gray\" stroke-width=\"0.8\" stroke-dasharray=\"4 3\"/>\n";
    out += text(xc(g), top + plot_h + 30.0, format_c(g), "middle", 10);
  }
  out += text(xc(c0), top + plot_h + 16.0, format_c(c0), "start", 10);
  out += text(xc(c1), top + plot_h + 16.0, format_c(c1), "end", 10);
  out += text(left + plot_w / 2.0, height - 4.0, "c", "middle", 12);

  const int n = static_cast<int>(grid.c_values.size());
  const int label_every = rows > 40 ? 10 : (rows > 15 ? 5 : 1);
  for (const auto& row : grid.rows) {
    const double y = yrow(row.omega);
    if (row.omega == 1 || row.omega % label_every == 0) out += text(left - 6.0, y + 4.0, std::to_string(row.omega), "end", 10);
    int i = 0;
    while (i < n) {
      if (!row.stable[i]) {
        ++i;
        continue;
      }
      int j = i;
      while (j + 1 < n && row.stable[j + 1]) ++j;
      const double xa = xc(grid.c_values[i]);
      const double xb = std::max(xc(grid.c_values[j]), xa + 1.0);
      out += "<line x1=\"" + num(xa) + "\" y1=\"" + num(y) + "\" x2=\"" + num(xb) + "\" y2=\"" + num(y) +
             "\" stroke=\"black\" stroke-width=\"" + num(0.6 * style.row_height) + "\"/>\n";
      i = j + 1;
    }
  }
  out += "<text x=\"14\" y=\"" + num(top + plot_h / 2.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">&#969;</text>\n";
  return out + "</svg>\n";
}

std::string filmstrip_svg(const std::vector<std::pair<double, ClosedCurve>>& snapshots, double cell) {
  const double label_h = 22.0;
  std::string out = header(cell * std::max<size_t>(snapshots.size(), 1), cell + label_h);
  for (size_t i = 0; i < snapshots.size(); ++i) {
    const auto& curve = snapshots[i].second;
    const auto m = metrics(curve);
    const double target = 2.0 * std::numbers::pi * std::max(1, std::abs(m.omega));
    const auto normalised = curve.translated(-m.centroid).scaled(target / m.length);
    // Common scale across frames: the unit circle spans 2 units.
    const double half = 0.5 * cell - 10.0;
    std::string d = "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
    const int n = normalised.size();
    double extent = 1.0;
    for (const auto& p : normalised.points()) extent = std::max(extent, std::abs(p));
    const double scale = half / extent;
    for (int k = 0; k <= n; ++k) {
      const Point p = normalised[k % n];
      d += (k == 0 ? "M" : " L") + num(cell * i + 0.5 * cell + p.real() * scale) + " " + num(0.5 * cell - p.imag() * scale);
    }
    out += d + " Z\"/>\n";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "t = %.4g", snapshots[i].first);
    out += text(cell * i + 0.5 * cell, cell + 14.0, buf, "middle", 11);
  }
  return out + "</svg>\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot open " + path + " for writing");
  out << content;
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

}  // namespace ccdf
