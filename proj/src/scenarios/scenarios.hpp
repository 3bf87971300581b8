#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "apps/estimators.hpp"
#include "control/laws.hpp"
#include "sim/trace.hpp"

namespace algdiff {

/// Shared knobs of every closed-loop study. The simulation and sampling
/// grids coincide.
struct ScenarioCommon {
  double horizon = 0;      // s
  double step = 1e-3;      // integration and sampling step, s
  double sigma = 0;        // measurement noise std deviation
  std::uint64_t seed = 1;
};

struct ManipulatorConfig {
  ScenarioCommon common{.horizon = 6.0, .sigma = 0.01};
  ManipulatorParams params{};
  ManipulatorGains gains{};
  double ref_start = 0.0;        // rad
  double ref_end = 0.7853981633974483;  // pi/4 rad
  double ref_t0 = 1.0;
  double ref_t1 = 3.0;
  int estimator_order = 3;
  // Short window: the closed loop has 0.1 s time constants, so the online
  // differentiator must stay well below that; the offline pass can afford
  // a longer window since delay does not matter there.
  double estimator_window = 0.07;
  double offline_window_factor = 4.0;
  bool truth_feedback = false;  // bypass the differentiator entirely
  double divergence_limit = 10.0;       // rad
};

struct RigidBodyConfig {
  enum class Variant { identified, true_inertia, false_inertia };

  ScenarioCommon common{.horizon = 20.0, .sigma = 0.005};
  std::array<double, 3> inertia_true{0.4, 0.3, 0.2};
  std::array<double, 3> inertia_false{0.2, 0.1, 0.1};
  double xi = 0.707;
  double varpi = 0.5;
  std::array<double, 3> w0{0.5, -0.3, 0.4};
  int estimator_order = 1;
  double estimator_window = 0.07;
  double condition_limit = 1e8;
  // Identification uses blocks from ident_start() until ident_stop, then
  // freezes; the first estimate needs ident_min_blocks blocks. Early blocks
  // are skipped because estimates right at warm-up carry the largest bias.
  double ident_stop = 5.0;
  int ident_min_blocks = 500;
  Variant primary = Variant::identified;

  double ident_start() const { return 2.0 * estimator_window; }
};

struct TwoTankConfig {
  ScenarioCommon common{.horizon = 8.0, .sigma = 0.01};
  TankParams params{};
  double varpi = 0.2;            // constant inflow perturbation, m/s
  double fault_w = 0.7;          // actuator-fault fraction
  double fault_time = 1.5;       // t_I
  double accommodation_time = 2.5;
  std::array<double, 2> x0{0.5, 0.5};
  double ref_start = 0.5, ref_end = 1.0, ref_t0 = 0.5, ref_t1 = 4.0;
  // (s^2 + 2*0.81*4 s + 16)^2 pole placement
  double gpi_l0 = 256.0, gpi_l1 = 207.36, gpi_l2 = 73.9904, gpi_l3 = 12.96;
  int estimator_order = 2;
  // Three differentiators, each tuned for its consumer: a short window
  // keeps the feedback path low-lag (the loop time constants are ~0.3 s),
  // a medium window feeds the fault parity check, and a long high-order
  // window feeds the inflow estimate, which tolerates delay but not bias.
  double estimator_window = 0.1;
  int monitor_order = 2;
  double monitor_window = 0.3;
  int inflow_order = 3;
  double inflow_window = 0.5;
  double varpi_epsilon = 0.1;
  // The reconfiguration gain fades in over this interval so the loop is
  // not hit with a step in its effective gain (the integral action unwinds
  // smoothly instead).
  double accommodation_ramp = 0.5;
  double varpi_smoothing = 0.5;  // trailing average of the inflow estimate, s
  int fault_smoothing = 1000;    // moving-average length for w_hat
  double fault_clamp_control = 0.95;  // bound on w_hat inside 1/(1-w)
  bool accommodation = true;
};

struct PertConfig {
  PertPlantKind kind = PertPlantKind::linear;
  ScenarioCommon common{.horizon = 20.0, .sigma = 0.025};
  double bias = 1.25;       // C
  double bias_time = 4.0;   // t_I
  double ref_amplitude = 1.0;
  double ref_omega = 2.5;
  // (s^2 + 2*0.81*4 s + 16)^2 pole placement
  double c0 = 256.0, c1 = 207.36, c2 = 73.9904, c3 = 12.96;
  std::array<double, 2> x0{0.0, 2.5};
  int estimator_order = 2;
  double estimator_window = 0.05;
  // First-order lag on the injected perturbation estimate. The raw
  // estimate contains the previous control sample, so feeding it straight
  // back closes a unit-delay integrator around u that the differentiator
  // lag destabilizes; the filter keeps that loop below the estimator
  // bandwidth and the outer integral action absorbs the residual.
  double compensation_filter = 0.03;
  bool compensation = true;
  double divergence_limit = 50.0;
  double metric_t0 = 5.0, metric_t1 = 20.0;
};

struct Metric {
  std::string name;
  double value;
};

struct ScenarioResult {
  SimTrace trace;
  std::vector<Metric> metrics;

  double metric(const std::string& name) const;
};

ScenarioResult run_manipulator(const ManipulatorConfig& cfg);
ScenarioResult run_rigidbody(const RigidBodyConfig& cfg);
ScenarioResult run_twotank(const TwoTankConfig& cfg);
ScenarioResult run_pert(const PertConfig& cfg);

}  // namespace algdiff
