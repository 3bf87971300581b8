#include <cmath>
#include <memory>

#include "control/reference.hpp"
#include "core/streaming.hpp"
#include "scenarios/scenarios.hpp"
#include "sim/noise.hpp"
#include "sim/ode.hpp"

namespace algdiff {
namespace {

struct FlatDerivs {
  double y, yd, ydd, yddd;
};

// Flat-output derivatives straight from the integrator state, used during
// the differentiator warm-up and in truth-fed runs.
FlatDerivs true_derivatives(const StateVec& x, const ManipulatorParams& p) {
  const double theta_l = x[0], theta_l_dot = x[1], theta_m = x[2];
  const double ydd =
      (-p.spring * (theta_l - theta_m) - p.mgh() * std::sin(theta_l)) / p.link_inertia;
  const double yddd = (-p.spring * (x[1] - x[3]) -
                       p.mgh() * std::cos(theta_l) * theta_l_dot) /
                      p.link_inertia;
  return {theta_l, theta_l_dot, ydd, yddd};
}

}  // namespace

ScenarioResult run_manipulator(const ManipulatorConfig& cfg) {
  const auto& p = cfg.params;
  const double h = cfg.common.step;
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.common.horizon / h));

  const auto traj =
      ReferenceTrajectory::rest_to_rest(cfg.ref_start, cfg.ref_end, cfg.ref_t0, cfg.ref_t1);

  auto online_kernel = std::make_shared<const EstimatorKernel>(EstimatorConfig{
      cfg.estimator_order, 0, cfg.estimator_window, h});
  auto offline_kernel = std::make_shared<const EstimatorKernel>(EstimatorConfig{
      cfg.estimator_order, 0, cfg.offline_window_factor * cfg.estimator_window, h});
  StreamingDifferentiator online(online_kernel, StreamMode::time_reversed);

  GaussianNoise noise({cfg.common.sigma, cfg.common.seed});

  ScenarioResult res;
  std::vector<double> tgrid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) tgrid[k] = static_cast<double>(k) * h;
  res.trace.set_time(tgrid);
  auto& ch_y = res.trace.add_channel("y");
  auto& ch_ymeas = res.trace.add_channel("y_meas");
  auto& ch_yref = res.trace.add_channel("y_ref");
  auto& ch_ye = res.trace.add_channel("y_e");
  auto& ch_yde = res.trace.add_channel("yd_e");
  auto& ch_ydde = res.trace.add_channel("ydd_e");
  auto& ch_yddde = res.trace.add_channel("yddd_e");
  auto& ch_u = res.trace.add_channel("u");
  auto& ch_tm = res.trace.add_channel("theta_m");
  auto& ch_tme = res.trace.add_channel("theta_m_e");
  auto& ch_ydd = res.trace.add_channel("ydd");
  auto& ch_tmoff = res.trace.add_channel("theta_m_e_offline");
  auto& ch_yddoff = res.trace.add_channel("ydd_e_offline");
  const double qnan = std::nan("");
  for (std::size_t k = 0; k <= steps; ++k) ch_tmoff[k] = ch_yddoff[k] = qnan;

  StateVec x{0.0, 0.0, 0.0, 0.0};  // theta_l, theta_l', theta_m, theta_m'
  std::vector<double> y_meas_log(steps + 1);

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = tgrid[k];
    const FlatDerivs truth = true_derivatives(x, p);
    const double y_meas = truth.y + noise.next();
    y_meas_log[k] = y_meas;

    FlatDerivs fb = truth;
    if (!cfg.truth_feedback) {
      if (auto est = online.push_sample(t, y_meas)) {
        fb = {est->values[0], est->values[1], est->values[2], est->values[3]};
      }
    }

    const RefPoint ref = traj.eval(t);
    const double v = manipulator_aux_input(fb.y, fb.yd, fb.ydd, fb.yddd, ref, cfg.gains);
    const double u = manipulator_control(fb.y, fb.yd, fb.ydd, fb.yddd, v, p);

    ch_y[k] = truth.y;
    ch_ymeas[k] = y_meas;
    ch_yref[k] = ref[0];
    ch_ye[k] = fb.y;
    ch_yde[k] = fb.yd;
    ch_ydde[k] = fb.ydd;
    ch_yddde[k] = fb.yddd;
    ch_u[k] = u;
    ch_tm[k] = x[2];
    ch_tme[k] = reconstruct_theta_m(fb.y, fb.ydd, p);
    ch_ydd[k] = truth.ydd;

    if (std::abs(truth.y) > cfg.divergence_limit)
      throw SimulationAbort("manipulator", t, "|y| exceeded divergence limit");

    if (k == steps) break;
    auto f = [&](double, const StateVec& s) {
      StateVec d(4);
      d[0] = s[1];
      d[1] = (-p.spring * (s[0] - s[2]) - p.mgh() * std::sin(s[0])) / p.link_inertia;
      d[2] = s[3];
      d[3] = (p.spring * (s[0] - s[2]) - p.damping * s[3] + p.torque_gain * u) /
             p.motor_inertia;
      return d;
    };
    x = rk4_step(f, t, x, h);
  }

  // Off-line pass: forward-mode re-estimation over the recorded output,
  // anchored one (longer) window behind the newest sample.
  {
    StreamingDifferentiator offline(offline_kernel, StreamMode::forward);
    const std::size_t lag = static_cast<std::size_t>(offline_kernel->intervals());
    for (std::size_t k = 0; k <= steps; ++k) {
      if (auto est = offline.push_sample(tgrid[k], y_meas_log[k])) {
        const std::size_t a = k - lag;
        ch_yddoff[a] = est->values[2];
        ch_tmoff[a] = reconstruct_theta_m(est->values[0], est->values[2], p);
      }
    }
  }

  const double t_on = cfg.estimator_window;
  const double t_off_end = cfg.common.horizon -
                           cfg.offline_window_factor * cfg.estimator_window;
  res.metrics.push_back(
      {"tracking_rms", rms_error(tgrid, ch_y, ch_yref, 3.0, cfg.common.horizon)});
  res.metrics.push_back(
      {"theta_m_online_rms", rms_error(tgrid, ch_tme, ch_tm, t_on, t_off_end)});
  res.metrics.push_back(
      {"theta_m_offline_rms", rms_error(tgrid, ch_tmoff, ch_tm, t_on, t_off_end)});
  res.metrics.push_back(
      {"ydd_online_rms", rms_error(tgrid, ch_ydde, ch_ydd, t_on, t_off_end)});
  res.metrics.push_back(
      {"ydd_offline_rms", rms_error(tgrid, ch_yddoff, ch_ydd, t_on, t_off_end)});
  return res;
}

}  // namespace algdiff
