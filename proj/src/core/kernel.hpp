#pragma once

#include <vector>

namespace algdiff {

/// Configuration of a window estimator.
///
/// The estimator reconstructs the derivatives x(0), x'(0), ..., x^(N)(0)
/// of a signal from M+1 uniform samples covering a window of length T.
struct EstimatorConfig {
  int taylor_order = 1;      ///< N, highest derivative order estimated
  int integral_order = 0;    ///< Nbar; 0 selects the default N + 2
  double window_length = 0;  ///< T in seconds
  double sample_step = 0;    ///< h in seconds; T/h must be an integer

  int resolved_integral_order() const {
    return integral_order > 0 ? integral_order : taylor_order + 2;
  }
};

/// Derivatives 0..N of a signal at a single time instant.
struct DerivativeEstimate {
  double anchor_time = 0;      ///< time the derivatives refer to
  std::vector<double> values;  ///< entry v estimates x^(v)(anchor_time)
  double delay = 0;            ///< anchor_time to newest sample used
};

/// Precomputed quadrature weights for one estimator configuration.
///
/// Each equation index a = 0..N pairs a weight vector (applied to the
/// samples, yielding the left-hand functional) with a row of the
/// anti-triangular coefficient matrix rhs. Weights are built on the
/// normalized window [0,1]; estimate() rescales derivative v by T^-v.
/// Immutable after construction and shareable across threads.
class EstimatorKernel {
 public:
  explicit EstimatorKernel(const EstimatorConfig& config);

  const EstimatorConfig& config() const { return config_; }
  int sample_count() const { return intervals_ + 1; }
  int intervals() const { return intervals_; }
  int order() const { return config_.taylor_order; }

  /// Weight vector of equation a, length sample_count().
  const std::vector<double>& lhs_weights(int a) const { return lhs_weights_[a]; }
  /// Coefficient of x^(v)(0) in equation a, on the normalized window.
  double rhs(int a, int v) const { return rhs_[a][v]; }

  /// Solves the anti-triangular system for the window's derivatives.
  /// samples must hold sample_count() finite values, oldest first.
  DerivativeEstimate estimate(const std::vector<double>& samples) const;

  /// Quadrature weights of the m-fold iterated integral on [0,1],
  /// exposed for the Cauchy-kernel identity checks.
  std::vector<double> iterated_integral_weights(int m) const;

  static constexpr int kMaxOrder = 8;

 private:
  EstimatorConfig config_;
  int intervals_;  // M
  std::vector<std::vector<double>> lhs_weights_;  // (N+1) x (M+1)
  std::vector<std::vector<double>> rhs_;          // (N+1) x (N+1)
};

}  // namespace algdiff
