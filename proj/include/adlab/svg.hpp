#pragma once

#include <string>
#include <vector>

namespace adlab::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Self-contained SVG line plot with markers. Non-positive values are
/// dropped on log axes. Output bytes depend only on the inputs.
std::string line_plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace adlab::svg
