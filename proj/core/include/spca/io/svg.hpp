#pragma once

#include <limits>
#include <string>
#include <vector>

namespace spca::io {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  double width = 640;
  double height = 420;
  // Axis ranges; NaN means "fit the data".
  double x_min = std::numeric_limits<double>::quiet_NaN();
  double x_max = std::numeric_limits<double>::quiet_NaN();
  double y_min = std::numeric_limits<double>::quiet_NaN();
  double y_max = std::numeric_limits<double>::quiet_NaN();
};

/// Line chart with one <polyline> per series, labeled axes and a legend.
/// Output depends only on the inputs (fixed number formatting).
std::string line_chart_svg(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace spca::io
