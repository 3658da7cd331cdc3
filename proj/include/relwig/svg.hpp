#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace relwig {

struct HeatmapSpec {
  std::string title;
  std::string x_label, y_label;
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
};

/// Filled-band heatmap with a fixed 10-level scale between min and max.
/// values are row-major: rows run along y (bottom to top), columns along x.
std::string render_heatmap_svg(std::span<const double> values, std::size_t rows, std::size_t cols,
                               const HeatmapSpec& spec);

}  // namespace relwig
