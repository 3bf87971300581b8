#include <cmath>
#include <limits>
#include <memory>

#include "control/gpi.hpp"
#include "control/reference.hpp"
#include "core/streaming.hpp"
#include "scenarios/scenarios.hpp"
#include "sim/noise.hpp"
#include "sim/ode.hpp"

namespace algdiff {
namespace {

double perturbation(double t) {
  const double t2 = t * t, t3 = t2 * t;
  return 10.0 * t3 * std::sin(2.0 * t) / (1.0 + t2 + t3);
}

struct PertRun {
  std::vector<double> y, y_ref, y_e, yd_e, ydd_e, u, z, z_e;
  double rms = 0;
  bool diverged = false;
};

PertRun simulate(const PertConfig& cfg, bool compensation) {
  const double h = cfg.common.step;
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.common.horizon / h));
  const auto traj = ReferenceTrajectory::sinusoid(cfg.ref_amplitude, cfg.ref_omega);

  auto kernel = std::make_shared<const EstimatorKernel>(
      EstimatorConfig{cfg.estimator_order, 0, cfg.estimator_window, h});
  StreamingDifferentiator diff(kernel, StreamMode::time_reversed);
  GaussianNoise noise({cfg.common.sigma, cfg.common.seed});
  GpiFilter gpi(cfg.c0, cfg.c1, cfg.c2, cfg.c3);

  PertRun run;
  for (auto* v : {&run.y, &run.y_ref, &run.y_e, &run.yd_e, &run.ydd_e, &run.u,
                  &run.z, &run.z_e})
    v->assign(steps + 1, std::nan(""));

  StateVec x{cfg.x0[0], cfg.x0[1]};
  double u_prev = 0.0;
  double z_f = 0.0;  // filtered compensation term
  const double alpha =
      cfg.compensation_filter > 0 ? 1.0 - std::exp(-h / cfg.compensation_filter) : 1.0;
  const bool linear = cfg.kind == PertPlantKind::linear;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const double z = perturbation(t);
    const double bias = t >= cfg.bias_time ? cfg.bias : 0.0;

    const double y_meas = x[0] + noise.next();
    double y_e, yd_e, ydd_e;
    if (auto est = diff.push_sample(t, y_meas)) {
      y_e = est->values[0];
      yd_e = est->values[1];
      ydd_e = est->values[2];
    } else {
      y_e = x[0];
      yd_e = x[1];
      ydd_e = (linear ? -x[0] : -x[0] * x[1]) + u_prev - z + bias;
    }

    const double z_e =
        compensation ? estimate_z(y_e, yd_e, ydd_e, u_prev, cfg.kind) : 0.0;
    z_f += alpha * (z_e - z_f);
    const RefPoint ref = traj.eval(t);
    const double gout = gpi.apply(y_e - ref[0], h);
    const double u = (linear ? y_e : y_e * yd_e) + z_f + ref[2] - gout;

    run.y[k] = x[0];
    run.y_ref[k] = ref[0];
    run.y_e[k] = y_e;
    run.yd_e[k] = yd_e;
    run.ydd_e[k] = ydd_e;
    run.u[k] = u;
    run.z[k] = z;
    run.z_e[k] = z_e;

    if (std::abs(x[0]) > cfg.divergence_limit || !std::isfinite(x[0])) {
      run.diverged = true;
      run.rms = std::numeric_limits<double>::infinity();
      return run;
    }

    if (k == steps) break;
    auto f = [&](double tt, const StateVec& s) {
      const double zz = perturbation(tt);
      const double bb = tt >= cfg.bias_time ? cfg.bias : 0.0;
      return StateVec{s[1], (linear ? -s[0] : -s[0] * s[1]) + u - zz + bb};
    };
    x = rk4_step(f, t, x, h);
    u_prev = u;
  }

  std::vector<double> tgrid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) tgrid[k] = static_cast<double>(k) * h;
  run.rms = rms_error(tgrid, run.y, run.y_ref, cfg.metric_t0, cfg.metric_t1);
  return run;
}

}  // namespace

ScenarioResult run_pert(const PertConfig& cfg) {
  PertRun comp = simulate(cfg, true);
  PertRun uncomp = simulate(cfg, false);
  const PertRun& primary = cfg.compensation ? comp : uncomp;

  const double h = cfg.common.step;
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.common.horizon / h));
  ScenarioResult res;
  std::vector<double> tgrid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) tgrid[k] = static_cast<double>(k) * h;
  res.trace.set_time(tgrid);
  res.trace.add_channel("y") = primary.y;
  res.trace.add_channel("y_ref") = primary.y_ref;
  res.trace.add_channel("y_e") = primary.y_e;
  res.trace.add_channel("yd_e") = primary.yd_e;
  res.trace.add_channel("ydd_e") = primary.ydd_e;
  res.trace.add_channel("u") = primary.u;
  res.trace.add_channel("z") = primary.z;
  res.trace.add_channel("z_e") = primary.z_e;
  res.trace.add_channel("y_compensated") = comp.y;
  res.trace.add_channel("y_uncompensated") = uncomp.y;

  res.metrics.push_back({"rms_compensated", comp.rms});
  res.metrics.push_back({"rms_uncompensated", uncomp.rms});
  res.metrics.push_back({"diverged_compensated", comp.diverged ? 1.0 : 0.0});
  res.metrics.push_back({"diverged_uncompensated", uncomp.diverged ? 1.0 : 0.0});
  return res;
}

}  // namespace algdiff
