#include "superres/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "superres/error.hpp"

namespace superres {

SlopeFit fit_slope(std::span<const std::pair<double, double>> points) {
  std::set<double> abscissae;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw Error("experiments", "invalid argument", "log-log fit needs positive finite values");
    }
    abscissae.insert(x);
  }
  if (abscissae.size() < 2) {
    throw Error("experiments", "invalid argument", "log-log fit needs two distinct abscissae");
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : points) {
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("experiments", "invalid argument", "quantile of an empty sample");
  if (!(q > 0.0 && q < 1.0)) throw Error("experiments", "invalid argument", "quantile must lie in (0, 1)");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace superres
