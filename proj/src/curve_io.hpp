#pragma once

#include <iosfwd>
#include <string>

#include "geometry.hpp"

namespace ccdf {

// Curve CSV: header "x,px,py", one row per sample, x = 2 pi j / N.

void write_curve_csv(std::ostream& out, const ClosedCurve& curve);
void write_curve_csv(const std::string& path, const ClosedCurve& curve);

/// Rejects files whose x column is not the uniform grid 2 pi j / N.
ClosedCurve read_curve_csv(std::istream& in);
ClosedCurve read_curve_csv(const std::string& path);

}  // namespace ccdf
