#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "scenarios/scenarios.hpp"

namespace algdiff {

/// Overrides applied on top of a (possibly absent) JSON config document.
struct SimulateOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<bool> accommodation;  // twotank only
  std::optional<bool> compensation;   // pert scenarios only
};

bool is_known_scenario(const std::string& id);

/// Runs one scenario end to end and writes trace.csv, metrics.json and the
/// per-figure SVG analogs into out_dir. config_json may be empty (defaults
/// apply); unknown keys or type mismatches throw std::invalid_argument.
/// Returns the metrics.json document (resolved config, seed, metrics).
std::string simulate_to_dir(const std::string& scenario, const std::string& config_json,
                            const SimulateOverrides& overrides,
                            const std::string& out_dir);

/// Streaming differentiation of one CSV column; writes anchor-aligned
/// derivative channels d0..dN (and a central-difference baseline fd_d1 when
/// requested) to out_path.
void diff_csv(const std::string& in_path, const std::string& column, int order,
              int integral_order, double window, bool time_reversed,
              bool fd_baseline, const std::string& out_path);

}  // namespace algdiff
