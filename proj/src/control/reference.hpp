#pragma once

#include <array>

namespace algdiff {

/// Reference value and its first four derivatives at one instant.
using RefPoint = std::array<double, 5>;

/// Smooth reference trajectories used by the tracking scenarios.
///
/// rest_to_rest interpolates between two setpoints with a 9th-degree
/// polynomial whose derivatives 1..4 vanish at both endpoints; sinusoid
/// is amplitude * sin(omega * t).
class ReferenceTrajectory {
 public:
  static ReferenceTrajectory rest_to_rest(double start_value, double end_value,
                                          double start_time, double end_time);
  static ReferenceTrajectory sinusoid(double amplitude, double omega);

  RefPoint eval(double t) const;

 private:
  enum class Kind { rest_to_rest, sinusoid } kind_;
  double p0_ = 0, p1_ = 0, t0_ = 0, t1_ = 0;  // rest-to-rest
  double amp_ = 0, omega_ = 0;                // sinusoid

  ReferenceTrajectory(Kind kind) : kind_(kind) {}
};

}  // namespace algdiff
