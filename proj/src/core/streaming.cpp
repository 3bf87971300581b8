#include "core/streaming.hpp"

#include <cmath>
#include <stdexcept>

namespace algdiff {

StreamingDifferentiator::StreamingDifferentiator(
    std::shared_ptr<const EstimatorKernel> kernel, StreamMode mode)
    : kernel_(std::move(kernel)), mode_(mode) {
  if (!kernel_) throw std::invalid_argument("null kernel");
  ring_.assign(kernel_->sample_count(), 0.0);
  scratch_.assign(kernel_->sample_count(), 0.0);
}

void StreamingDifferentiator::reset() {
  head_ = 0;
  count_ = 0;
  has_last_ = false;
}

std::optional<DerivativeEstimate> StreamingDifferentiator::push_sample(double t,
                                                                       double value) {
  const double h = kernel_->config().sample_step;
  if (has_last_ && std::abs((t - last_t_) - h) > 1e-9)
    throw std::invalid_argument("non-uniform sample spacing");
  last_t_ = t;
  has_last_ = true;

  const std::size_t window = ring_.size();
  ring_[head_] = value;
  head_ = (head_ + 1) % window;
  if (count_ < window) ++count_;
  if (count_ < window) return std::nullopt;

  // Unroll the ring oldest-first, or newest-first when time is reversed.
  for (std::size_t i = 0; i < window; ++i) {
    const std::size_t src = (head_ + i) % window;
    const std::size_t dst = mode_ == StreamMode::forward ? i : window - 1 - i;
    scratch_[dst] = ring_[src];
  }

  DerivativeEstimate est = kernel_->estimate(scratch_);
  if (mode_ == StreamMode::forward) {
    est.anchor_time = t - kernel_->config().window_length;
    est.delay = kernel_->config().window_length;
  } else {
    est.anchor_time = t;
    est.delay = 0.0;
    for (std::size_t v = 1; v < est.values.size(); v += 2) est.values[v] = -est.values[v];
  }
  return est;
}

std::optional<double> StreamingDifferentiator::denoise(double t, double value) {
  auto est = push_sample(t, value);
  if (!est) return std::nullopt;
  return est->values[0];
}

}  // namespace algdiff
