#pragma once

#include <span>
#include <utility>
#include <vector>

namespace superres {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  ///< in natural-log units
  double r_squared = 0.0;
};

/// Ordinary least squares of log(y) on log(x).
///
/// Throws Error("experiments", "invalid argument") for nonpositive values or
/// fewer than two distinct abscissae. A perfect fit (including constant y)
/// reports r_squared = 1.
SlopeFit fit_slope(std::span<const std::pair<double, double>> points);

/// Linearly interpolated sample quantile (the usual "type 7" rule).
double quantile(std::vector<double> values, double q);

}  // namespace superres
