#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "superres/stats.hpp"

namespace superres {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;  ///< positive (x, y)
  std::optional<SlopeFit> fit;                     ///< drawn as a line over the x range
};

/// Standalone SVG document with log-scaled axes. Nonpositive points are skipped.
void write_loglog_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<PlotSeries>& series);

}  // namespace superres
