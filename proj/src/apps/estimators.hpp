#pragma once

#include <array>
#include <optional>
#include <vector>

#include "control/laws.hpp"

namespace algdiff {

/// Non-asymptotic reconstruction of the unmeasured motor angle from the
/// flat output and its estimated second derivative.
double reconstruct_theta_m(double y, double ydd, const ManipulatorParams& p);

/// Stacked least-squares identification of the rigid-body inertias from
/// (w, wdot, u) samples. Each sample contributes the 3-row block
///
///   [  wdot1  -w2 w3   w2 w3 ]         [ u1 ]
///   [  w1 w3   wdot2  -w1 w3 ] * I  =  [ u2 ]
///   [ -w1 w2   w1 w2   wdot3 ]         [ u3 ]
///
/// accumulated into normal equations. Single-owner accumulator.
class InertiaRegression {
 public:
  void add_block(const std::array<double, 3>& w, const std::array<double, 3>& wdot,
                 const std::array<double, 3>& u);

  /// Least-squares estimate, or nullopt while the normal equations are
  /// ill-conditioned ("not yet identifiable"). wdot_noise_var, when known,
  /// is the variance of the additive noise on the wdot entries; it is
  /// subtracted from the normal-equation diagonal (bias-compensated least
  /// squares), since squared regressor noise otherwise shrinks the
  /// estimates systematically.
  std::optional<std::array<double, 3>> solve(double condition_limit = 1e8,
                                             double wdot_noise_var = 0.0) const;

  std::size_t blocks() const { return blocks_; }

 private:
  std::array<std::array<double, 3>, 3> ata_{};
  std::array<double, 3> atb_{};
  std::size_t blocks_ = 0;
};

/// Two-tank physical constants.
struct TankParams {
  double outflow = 0.5;  // c
  double area = 1.0;     // A, m^2
};

/// Pure-system flatness inversion of the two-tank model: upstream level
/// and control reproducing the given flat-output derivatives. Throws when
/// the arguments leave the valid flow regime.
struct TankFlatPoint {
  double x1;
  double u;
};
TankFlatPoint tank_flat_inverse(double y, double yd, double ydd, const TankParams& p);

/// Constant-perturbation estimate from the reconstructed upstream level,
/// via the integration-by-parts identity on (0, t). x1 and u are sampled
/// on a uniform grid of step h starting at t = 0; t = (n-1) h. Returns
/// nullopt for t <= epsilon, where the formula is indeterminate.
std::optional<double> estimate_varpi(const std::vector<double>& x1,
                                     const std::vector<double>& u, double h,
                                     const TankParams& p, double epsilon = 0.1);

/// Actuator-fault fraction from the tank parity equation, clamped to
/// [w_min, w_max]. Returns nullopt when |u| is too small to divide by.
/// Callers that average many samples should widen the clamp and bound the
/// average instead, since clamping raw values first biases the mean.
std::optional<double> estimate_fault(double y, double yd, double ydd, double u,
                                     double varpi, const TankParams& p,
                                     double u_threshold = 1e-3, double w_min = 0.0,
                                     double w_max = 1.0);

enum class PertPlantKind { linear, nonlinear };

/// Perturbation estimate of the second-order test plants, exact up to the
/// piecewise-constant bias absorbed by the GPI integral action.
double estimate_z(double y, double yd, double ydd, double u, PertPlantKind kind);

}  // namespace algdiff
