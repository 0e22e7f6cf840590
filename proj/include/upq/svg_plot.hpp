#pragma once

#include <string>

#include "upq/report.hpp"

namespace upq {

/// Standalone SVG: axes with ticks, one polyline or marker set per series,
/// vertical error bars, legend. Non-positive values are dropped on log axes.
std::string render_svg(const Plot& plot, int width = 640, int height = 420);

} // namespace upq
