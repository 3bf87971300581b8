#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "core/kernel.hpp"

namespace algdiff {

enum class StreamMode {
  forward,       // derivatives anchored at the oldest sample, delay T
  time_reversed  // derivatives anchored at the newest sample, zero delay
};

/// Causal per-sample differentiator over a sliding window.
///
/// Emits nothing until the window is full. In time_reversed mode the window
/// is flipped before estimation and derivative v picks up a (-1)^v parity,
/// so the result refers to the newest sample. Single-owner: the ring buffer
/// is mutable state.
class StreamingDifferentiator {
 public:
  StreamingDifferentiator(std::shared_ptr<const EstimatorKernel> kernel,
                          StreamMode mode);

  std::optional<DerivativeEstimate> push_sample(double t, double value);

  /// Projection of push_sample onto the order-0 channel (denoised signal).
  std::optional<double> denoise(double t, double value);

  bool warm() const { return count_ >= static_cast<std::size_t>(kernel_->sample_count()); }
  StreamMode mode() const { return mode_; }
  const EstimatorKernel& kernel() const { return *kernel_; }

  void reset();

 private:
  std::shared_ptr<const EstimatorKernel> kernel_;
  StreamMode mode_;
  std::vector<double> ring_;
  std::vector<double> scratch_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  double last_t_ = 0;
  bool has_last_ = false;
};

}  // namespace algdiff
