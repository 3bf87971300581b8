#pragma once

#include <string>

#include "sim/trace.hpp"

namespace algdiff {

/// Serializes a trace as UTF-8 CSV: header row, column 1 `t`, values with
/// 17 significant digits so write -> read round-trips bit-exactly.
std::string to_csv(const SimTrace& trace);

void write_csv(const SimTrace& trace, const std::string& path);

/// Parses a CSV trace; the first column becomes the time grid.
SimTrace read_csv(const std::string& path);
SimTrace parse_csv(const std::string& text);

}  // namespace algdiff
