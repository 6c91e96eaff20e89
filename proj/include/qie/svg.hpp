#pragma once

#include <string>
#include <vector>

namespace qie {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal line plot: axes, min/max tick labels, one polyline per series.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace qie
