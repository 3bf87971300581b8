#pragma once

#include <string>
#include <vector>

#include "sim/trace.hpp"

namespace algdiff {

/// One plotted series. Dashed rendering mirrors the usual reference-vs-
/// output figure convention ("- -" vs "--").
struct SvgSeries {
  std::string channel;
  std::string label;
  bool dashed = false;
  std::string color = "#000000";
};

struct SvgStyle {
  int width = 860;
  int height = 480;
  std::string title;
};

/// Self-contained SVG line plot. Deterministic: identical inputs yield
/// identical bytes. Axis ranges cover the plotted channels with a 5%
/// margin. Rows with non-finite values are skipped.
std::string emit_svg(const SimTrace& trace, const std::vector<SvgSeries>& series,
                     const SvgStyle& style);

void write_svg(const SimTrace& trace, const std::vector<SvgSeries>& series,
               const SvgStyle& style, const std::string& path);

}  // namespace algdiff
