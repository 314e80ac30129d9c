#include "superres/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace superres {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// printf-style formatting into a string; coordinates are printed with two
// decimals, which is far below a pixel.
template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

}  // namespace

void write_loglog_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<PlotSeries>& series) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      x_lo = std::min(x_lo, std::log10(x));
      x_hi = std::max(x_hi, std::log10(x));
      y_lo = std::min(y_lo, std::log10(y));
      y_hi = std::max(y_hi, std::log10(y));
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = y_lo = 0.0;
    x_hi = y_hi = 1.0;
  }
  x_lo = std::floor(x_lo * 10.0) / 10.0;
  x_hi = std::ceil(x_hi * 10.0) / 10.0;
  y_lo = std::floor(y_lo);
  y_hi = std::ceil(y_hi);
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double lx) { return kLeft + (lx - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double ly) { return kTop + (y_hi - ly) / (y_hi - y_lo) * ph; };

  out << fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
              "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\" font-size=\"12\">\n",
              kWidth, kHeight, kWidth, kHeight);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << fmt("<text x=\"%.2f\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">", kLeft + pw / 2)
      << escape(title) << "</text>\n";
  out << fmt("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
             kLeft, kTop, pw, ph);

  // Decade ticks on y, and ticks at 1, 2, 5 multiples on x.
  for (int e = static_cast<int>(y_lo); e <= static_cast<int>(y_hi); ++e) {
    const double y = py(e);
    out << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>\n", kLeft, y, kLeft + pw, y);
    out << fmt("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">1e%d</text>\n", kLeft - 6, y + 4, e);
  }
  for (int e = static_cast<int>(std::floor(x_lo)); e <= static_cast<int>(std::ceil(x_hi)); ++e) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double lx = e + std::log10(m);
      if (lx < x_lo - 1e-9 || lx > x_hi + 1e-9) continue;
      const double x = px(lx);
      out << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>\n", x, kTop, x, kTop + ph);
      out << fmt("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%g</text>\n", x, kTop + ph + 16,
                 m * std::pow(10.0, e));
    }
  }
  out << fmt("<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">", kLeft + pw / 2, kHeight - 16)
      << escape(x_label) << "</text>\n";
  out << fmt("<text x=\"20\" y=\"%.2f\" text-anchor=\"middle\" transform=\"rotate(-90 20 %.2f)\">",
             kTop + ph / 2, kTop + ph / 2)
      << escape(y_label) << "</text>\n";

  double legend_y = kTop + 10;
  for (const auto& s : series) {
    const std::string color = escape(s.color);
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      out << fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n", px(std::log10(x)),
                 py(std::log10(y)), color.c_str());
    }
    std::string label = s.label;
    if (s.fit) {
      const double ln10 = std::log(10.0);
      auto fit_ly = [&](double lx) { return (s.fit->intercept + s.fit->slope * lx * ln10) / ln10; };
      out << fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-dasharray=\"5,3\"/>\n",
                 px(x_lo), py(fit_ly(x_lo)), px(x_hi), py(fit_ly(x_hi)), color.c_str());
      label += fmt(" (slope %.2f)", s.fit->slope);
    }
    out << fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%s\"/>\n", kLeft + pw + 14, legend_y, color.c_str());
    out << fmt("<text x=\"%.2f\" y=\"%.2f\">", kLeft + pw + 24, legend_y + 4) << escape(label) << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
}

}  // namespace superres
