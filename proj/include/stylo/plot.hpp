#pragma once

#include <string>
#include <vector>

#include "stylo/distance.hpp"
#include "stylo/matrix.hpp"

namespace stylo::plot {

/// Minimal native SVG charts. Output is a pure function of the inputs, so
/// plots compare byte-for-byte across runs.

struct Point {
  double x = 0.0;
  double y = 0.0;
  std::string label;
  std::string group;  // one color per group, in order of first appearance
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
};

std::string scatter_svg(const std::vector<Point>& points, const Axes& axes);

struct Series {
  std::string name;
  std::vector<double> y;  // plotted at x = 0, 1, 2, ...
};

std::string line_svg(const std::vector<Series>& series, const Axes& axes);

/// Cells shaded by value: the smallest value is darkest.
std::string heatmap_svg(const std::vector<std::string>& ids, const Matrix& values,
                        const std::string& title);

/// Leaves on the left, merge height growing to the right.
std::string dendrogram_svg(const distance::Dendrogram& tree, const std::string& title);

}  // namespace stylo::plot
