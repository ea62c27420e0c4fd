#pragma once

// Deterministic SVG output for curves, stability diagrams and flow filmstrips.
// Numbers are printed with a fixed format so equal data gives equal files.

#include <string>
#include <vector>

#include "geometry.hpp"
#include "stability.hpp"

namespace ccdf {

struct LabelledCurve {
  std::string label;
  ClosedCurve curve;
};

/// Panels in one row, each curve centred and scaled to fit its cell.
std::string curve_gallery_svg(const std::vector<LabelledCurve>& curves, double cell = 220.0);

struct RegionStyle {
  std::string title;
  /// Dashed vertical guides, drawn when inside the c range.
  std::vector<double> guides{1.0 / 9.0, 1.0, 1.5};
  double width = 720.0;
  double row_height = 14.0;
};

/// Horizontal stable segments per omega row, taken from runs of stable grid cells.
std::string stability_region_svg(const StabilityGrid& grid, const RegionStyle& style = {});

/// Snapshots centred at their centroid and rescaled to length 2 pi (or 2 pi |omega|).
std::string filmstrip_svg(const std::vector<std::pair<double, ClosedCurve>>& snapshots, double cell = 160.0);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace ccdf
