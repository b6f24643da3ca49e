#include "pathreg/report.hpp"

#include "pathreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pathreg {

namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 80, kRight = 24, kTop = 44, kBottom = 56;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string boundary_label(double c, const std::optional<Rational>& exact) {
  if (exact) return "c = " + to_string(*exact);
  char buf[40];
  std::snprintf(buf, sizeof buf, "c = %.4g", c);
  return buf;
}

}  // namespace

std::string render_curve_svg(const CurvePlot& plot) {
  if (plot.c.size() < 2 || plot.c.size() != plot.trend.size()) {
    throw Error(ErrorCode::InvalidArgument, "curve needs at least two points");
  }
  const double lx0 = std::log10(plot.c.front());
  const double lx1 = std::log10(plot.c.back());
  double y0 = std::min(0.0, *std::min_element(plot.trend.begin(), plot.trend.end()));
  double y1 = std::max(0.0, *std::max_element(plot.trend.begin(), plot.trend.end()));
  if (y1 - y0 < 1e-300) {
    y0 -= 1.0;
    y1 += 1.0;
  }
  const double pad = 0.06 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double c) { return kLeft + (std::log10(c) - lx0) / (lx1 - lx0) * pw; };
  auto sy = [&](double t) { return kTop + (y1 - t) / (y1 - y0) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + escape(plot.title) + "</text>\n";

  // Reversal regions, clipped to the plotted range.
  for (const auto& iv : plot.shaded) {
    const double a = std::max(iv.lo, plot.c.front());
    const double b = std::min(iv.hi, plot.c.back());
    if (!(b > a)) continue;
    svg += "<rect class=\"regime\" x=\"" + fmt(sx(a)) + "\" y=\"" + fmt(kTop) + "\" width=\"" +
           fmt(sx(b) - sx(a)) + "\" height=\"" + fmt(ph) + "\" fill=\"#e34a33\" fill-opacity=\"0.25\"/>\n";
  }

  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" +
         fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(sy(0)) + "\" x2=\"" + fmt(kLeft + pw) + "\" y2=\"" +
         fmt(sy(0)) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  // Decade ticks, thinned to at most about a dozen labels.
  const int d0 = static_cast<int>(std::ceil(lx0 - 1e-9));
  const int d1 = static_cast<int>(std::floor(lx1 + 1e-9));
  const int step = std::max(1, (d1 - d0) / 12 + 1);
  for (int d = d0; d <= d1; d += step) {
    const double x = sx(std::pow(10.0, d));
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kTop + ph) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
           fmt(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(kTop + ph + 19) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" + std::to_string(d) +
           "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double t = y0 + (y1 - y0) * k / 4.0;
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", t);
    svg += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(sy(t) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">regularization parameter c</text>\n";

  svg += "<polyline class=\"trend\" fill=\"none\" stroke=\"#2b6cb0\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < plot.c.size(); ++i) {
    if (i) svg += ' ';
    svg += fmt(sx(plot.c[i])) + "," + fmt(sy(plot.trend[i]));
  }
  svg += "\"/>\n";

  // Finite regime boundaries inside the plotted range.
  for (const auto& iv : plot.shaded) {
    const std::pair<double, const std::optional<Rational>*> ends[] = {{iv.lo, &iv.lo_exact},
                                                                      {iv.hi, &iv.hi_exact}};
    for (const auto& [c, exact] : ends) {
      if (!(c > plot.c.front() && c < plot.c.back())) continue;
      const double x = sx(c);
      svg += "<line class=\"crossing\" x1=\"" + fmt(x) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(x) +
             "\" y2=\"" + fmt(kTop + ph) + "\" stroke=\"#e34a33\" stroke-dasharray=\"2 2\"/>\n";
      svg += "<text x=\"" + fmt(x + 4) + "\" y=\"" + fmt(kTop + 14) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#b0301c\">" +
             escape(boundary_label(c, *exact)) + "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace pathreg
