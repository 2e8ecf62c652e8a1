#pragma once

#include <string>
#include <vector>

namespace adasample {

// One polyline; x and y must have equal length. Non-finite points (and
// non-positive y on log plots) are skipped.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained SVG line plot: axes with tick labels, one polyline per
// series, circle markers when a series has few points, legend from the
// labels. log_y plots log10 of the values.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series, bool log_y);

}  // namespace adasample
