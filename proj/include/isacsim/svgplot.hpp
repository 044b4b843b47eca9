#pragma once

#include <string>
#include <vector>

namespace isacsim {
namespace svgplot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Renders a self-contained SVG line chart (axes, ticks, legend, one
/// polyline per series). No external assets.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series, int width = 760,
                       int height = 480);

}  // namespace svgplot
}  // namespace isacsim
