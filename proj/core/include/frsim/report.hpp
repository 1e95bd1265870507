#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace frsim {

/// Shortest round-trip decimal text for a double ('.' separator, no locale).
std::string format_number(double value);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // optional symmetric error bars
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Self-contained SVG line chart.
void write_svg(std::ostream& out, const LinePlot& plot);

}  // namespace frsim
