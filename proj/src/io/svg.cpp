#include "io/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace algdiff {
namespace {

constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 32;
constexpr int kMarginBottom = 40;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string emit_svg(const SimTrace& trace, const std::vector<SvgSeries>& series,
                     const SvgStyle& style) {
  if (trace.size() == 0) throw std::invalid_argument("empty trace");
  if (series.empty()) throw std::invalid_argument("no series to plot");

  double xmin = trace.time().front(), xmax = trace.time().back();
  double ymin = 0, ymax = 0;
  bool first = true;
  for (const auto& s : series) {
    for (double v : trace.channel(s.channel)) {
      if (!std::isfinite(v)) continue;
      if (first) {
        ymin = ymax = v;
        first = false;
      } else {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
    }
  }
  if (first) throw std::invalid_argument("no finite values to plot");
  double yspan = ymax - ymin;
  if (yspan == 0) yspan = 1.0;
  ymin -= 0.05 * yspan;
  ymax += 0.05 * yspan;
  double xspan = xmax - xmin;
  if (xspan == 0) xspan = 1.0;

  const double pw = style.width - kMarginLeft - kMarginRight;
  const double ph = style.height - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - xmin) / xspan * pw; };
  auto py = [&](double y) { return kMarginTop + (ymax - y) / (ymax - ymin) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(style.width) + "\" height=\"" + std::to_string(style.height) +
         "\" viewBox=\"0 0 " + std::to_string(style.width) + " " +
         std::to_string(style.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (!style.title.empty())
    out += "<text x=\"" + std::to_string(style.width / 2) +
           "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">" +
           style.title + "</text>\n";

  // frame and ticks
  out += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" +
         std::to_string(kMarginTop) + "\" width=\"" + fmt(pw) + "\" height=\"" +
         fmt(ph) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + xspan * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    out += "<text x=\"" + fmt(px(xv)) + "\" y=\"" +
           std::to_string(style.height - kMarginBottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
           fmt(xv) + "</text>\n";
    out += "<text x=\"" + std::to_string(kMarginLeft - 6) + "\" y=\"" +
           fmt(py(yv) + 3) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
           fmt(yv) + "</text>\n";
  }

  int legend_y = kMarginTop + 14;
  for (const auto& s : series) {
    const auto& vals = trace.channel(s.channel);
    std::string points;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (!std::isfinite(vals[i])) continue;
      points += fmt(px(trace.time()[i])) + "," + fmt(py(vals[i])) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\"";
    if (s.dashed) out += " stroke-dasharray=\"6,4\"";
    out += " points=\"" + points + "\"/>\n";

    const std::string label = s.label.empty() ? s.channel : s.label;
    out += "<line x1=\"" + std::to_string(kMarginLeft + 8) + "\" y1=\"" +
           std::to_string(legend_y - 4) + "\" x2=\"" + std::to_string(kMarginLeft + 32) +
           "\" y2=\"" + std::to_string(legend_y - 4) + "\" stroke=\"" + s.color + "\"";
    if (s.dashed) out += " stroke-dasharray=\"6,4\"";
    out += "/>\n";
    out += "<text x=\"" + std::to_string(kMarginLeft + 38) + "\" y=\"" +
           std::to_string(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + label + "</text>\n";
    legend_y += 16;
  }

  out += "</svg>\n";
  return out;
}

void write_svg(const SimTrace& trace, const std::vector<SvgSeries>& series,
               const SvgStyle& style, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << emit_svg(trace, series, style);
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace algdiff
