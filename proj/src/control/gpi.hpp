#pragma once

namespace algdiff {

/// Generalized proportional-integral filter with transfer function
///
///   G(s) = (l2 s^2 + l1 s + l0) / (s (s + l3))
///        = l2 + ((l1 - l2 l3) s + l0) / (s^2 + l3 s)
///
/// realized as two integrator states plus the l2 feedthrough. The pole at
/// the origin provides the integral action. Single-owner stateful object.
class GpiFilter {
 public:
  GpiFilter(double l0, double l1, double l2, double l3)
      : l0_(l0), l1_(l1), l2_(l2), l3_(l3) {}

  /// Advances the realization one RK4 step of size h with the error sample
  /// held constant, then returns the filter output.
  double apply(double e, double h);

  void reset() { x1_ = x2_ = 0.0; }

  /// Internal integrator state, for bumpless controller reconfiguration:
  /// capture while the loop is healthy, restore when switching laws.
  struct State {
    double x1 = 0.0, x2 = 0.0;
  };
  State state() const { return {x1_, x2_}; }
  void set_state(const State& s) {
    x1_ = s.x1;
    x2_ = s.x2;
  }

  double l0() const { return l0_; }
  double l1() const { return l1_; }
  double l2() const { return l2_; }
  double l3() const { return l3_; }

  /// Analytic unit-step response, for realization checks.
  double step_response(double t) const;

 private:
  double l0_, l1_, l2_, l3_;
  double x1_ = 0.0, x2_ = 0.0;
};

}  // namespace algdiff
