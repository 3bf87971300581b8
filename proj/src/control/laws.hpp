#pragma once

#include <array>

#include "control/reference.hpp"

namespace algdiff {

/// Flexible-joint manipulator: DC motor driving an inverted pendulum
/// through a torsional spring. All SI units.
struct ManipulatorParams {
  double motor_inertia = 3.7e-3;   // J_m, kg m^2
  double link_inertia = 9.3e-3;    // J_l, kg m^2
  double arm_length = 0.15;        // h, m
  double mass = 0.21;              // kg
  double damping = 4.6e-2;         // B
  double torque_gain = 8e-2;       // K_tau, N m / V
  double spring = 0.8;             // kappa, N m / rad
  double gravity = 9.81;           // m / s^2

  double mgh() const { return mass * gravity * arm_length; }
};

/// Tracking-error gains of the linearized 4th-order loop.
struct ManipulatorGains {
  double g1 = 1e4;   // coefficients of (s + 10)^4
  double g2 = 4e3;
  double g3 = 600.0;
  double g4 = 40.0;
};

/// Auxiliary input v: 4th-derivative tracking law on the flat output.
double manipulator_aux_input(double y, double yd, double ydd, double yddd,
                             const RefPoint& ref, const ManipulatorGains& gains);

/// Flatness inversion: motor voltage realizing y'''' = v, evaluated at the
/// supplied (possibly estimated) flat-output derivatives.
double manipulator_control(double y, double yd, double ydd, double yddd,
                           double v, const ManipulatorParams& p);

/// Per-axis PI gains lambda1 = 2 xi varpi, lambda0 = varpi^2.
struct PiGains {
  double lambda1 = 0;
  double lambda0 = 0;

  static PiGains from_damping(double xi, double varpi) {
    return {2.0 * xi * varpi, varpi * varpi};
  }
};

/// Euler-equation stabilizer: cross-term cancellation with estimated
/// inertias plus PI action per axis. Integrals of w are accumulated by the
/// caller on the simulation grid. Throws on non-positive inertia estimates.
std::array<double, 3> rigid_pi_control(const std::array<double, 3>& w,
                                       const std::array<double, 3>& w_integral,
                                       const std::array<double, 3>& inertia,
                                       const PiGains& gains);

}  // namespace algdiff
