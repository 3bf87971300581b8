#include "io/config.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <set>

#include <json.hpp>

#include "core/streaming.hpp"
#include "io/csv.hpp"
#include "io/svg.hpp"

namespace algdiff {
namespace {

using nlohmann::json;

/// json object reader that tracks key usage so leftovers can be rejected.
class Reader {
 public:
  Reader(const json& j, std::string context) : j_(j), ctx_(std::move(context)) {
    if (!j_.is_object())
      throw std::invalid_argument(ctx_ + ": expected a JSON object");
  }

  template <typename T>
  T get(const char* key, T fallback) {
    auto it = j_.find(key);
    if (it == j_.end()) return fallback;
    seen_.insert(key);
    try {
      return it->get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument(ctx_ + "." + key + ": wrong type");
    }
  }

  template <std::size_t N>
  std::array<double, N> get(const char* key, std::array<double, N> fallback) {
    auto it = j_.find(key);
    if (it == j_.end()) return fallback;
    seen_.insert(key);
    if (!it->is_array() || it->size() != N)
      throw std::invalid_argument(ctx_ + "." + key + ": expected an array of " +
                                  std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      if (!(*it)[i].is_number())
        throw std::invalid_argument(ctx_ + "." + key + ": expected numbers");
      out[i] = (*it)[i].get<double>();
    }
    return out;
  }

  std::optional<Reader> object(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) return std::nullopt;
    seen_.insert(key);
    return Reader(*it, ctx_ + "." + key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw std::invalid_argument(ctx_ + ": unknown key '" + it.key() + "'");
  }

 private:
  const json& j_;
  std::string ctx_;
  std::set<std::string> seen_;
};

void read_common(Reader& r, ScenarioCommon& c) {
  c.horizon = r.get("horizon", c.horizon);
  c.step = r.get("step", c.step);
  c.sigma = r.get("sigma", c.sigma);
  c.seed = r.get("seed", c.seed);
}

json common_json(const ScenarioCommon& c) {
  return {{"horizon", c.horizon}, {"step", c.step}, {"sigma", c.sigma}, {"seed", c.seed}};
}

void read_estimator(Reader& parent, int& order, double& window) {
  if (auto est = parent.object("estimator")) {
    order = est->get("order", order);
    window = est->get("window", window);
    est->finish();
  }
}

json estimator_json(int order, double window) {
  return {{"order", order}, {"window", window}};
}

// ---- manipulator ----

ManipulatorConfig parse_manipulator(const json& j) {
  ManipulatorConfig c;
  Reader r(j, "manipulator");
  read_common(r, c.common);
  if (auto pr = r.object("params")) {
    auto& p = c.params;
    p.motor_inertia = pr->get("motor_inertia", p.motor_inertia);
    p.link_inertia = pr->get("link_inertia", p.link_inertia);
    p.arm_length = pr->get("arm_length", p.arm_length);
    p.mass = pr->get("mass", p.mass);
    p.damping = pr->get("damping", p.damping);
    p.torque_gain = pr->get("torque_gain", p.torque_gain);
    p.spring = pr->get("spring", p.spring);
    p.gravity = pr->get("gravity", p.gravity);
    pr->finish();
  }
  if (auto gr = r.object("gains")) {
    c.gains.g1 = gr->get("g1", c.gains.g1);
    c.gains.g2 = gr->get("g2", c.gains.g2);
    c.gains.g3 = gr->get("g3", c.gains.g3);
    c.gains.g4 = gr->get("g4", c.gains.g4);
    gr->finish();
  }
  if (auto rr = r.object("reference")) {
    c.ref_start = rr->get("start", c.ref_start);
    c.ref_end = rr->get("end", c.ref_end);
    c.ref_t0 = rr->get("t0", c.ref_t0);
    c.ref_t1 = rr->get("t1", c.ref_t1);
    rr->finish();
  }
  read_estimator(r, c.estimator_order, c.estimator_window);
  c.offline_window_factor = r.get("offline_window_factor", c.offline_window_factor);
  c.truth_feedback = r.get("truth_feedback", c.truth_feedback);
  c.divergence_limit = r.get("divergence_limit", c.divergence_limit);
  r.finish();
  return c;
}

json manipulator_json(const ManipulatorConfig& c) {
  json j = common_json(c.common);
  j["params"] = {{"motor_inertia", c.params.motor_inertia},
                 {"link_inertia", c.params.link_inertia},
                 {"arm_length", c.params.arm_length},
                 {"mass", c.params.mass},
                 {"damping", c.params.damping},
                 {"torque_gain", c.params.torque_gain},
                 {"spring", c.params.spring},
                 {"gravity", c.params.gravity}};
  j["gains"] = {{"g1", c.gains.g1}, {"g2", c.gains.g2}, {"g3", c.gains.g3},
                {"g4", c.gains.g4}};
  j["reference"] = {{"start", c.ref_start}, {"end", c.ref_end}, {"t0", c.ref_t0},
                    {"t1", c.ref_t1}};
  j["estimator"] = estimator_json(c.estimator_order, c.estimator_window);
  j["offline_window_factor"] = c.offline_window_factor;
  j["truth_feedback"] = c.truth_feedback;
  j["divergence_limit"] = c.divergence_limit;
  return j;
}

// ---- rigid body ----

RigidBodyConfig parse_rigidbody(const json& j) {
  RigidBodyConfig c;
  Reader r(j, "rigidbody");
  read_common(r, c.common);
  c.inertia_true = r.get("inertia_true", c.inertia_true);
  c.inertia_false = r.get("inertia_false", c.inertia_false);
  c.xi = r.get("xi", c.xi);
  c.varpi = r.get("varpi", c.varpi);
  c.w0 = r.get("w0", c.w0);
  read_estimator(r, c.estimator_order, c.estimator_window);
  c.condition_limit = r.get("condition_limit", c.condition_limit);
  c.ident_stop = r.get("ident_stop", c.ident_stop);
  c.ident_min_blocks = r.get("ident_min_blocks", c.ident_min_blocks);
  const std::string primary = r.get<std::string>("primary", "identified");
  if (primary == "identified")
    c.primary = RigidBodyConfig::Variant::identified;
  else if (primary == "true_inertia")
    c.primary = RigidBodyConfig::Variant::true_inertia;
  else if (primary == "false_inertia")
    c.primary = RigidBodyConfig::Variant::false_inertia;
  else
    throw std::invalid_argument("rigidbody.primary: unknown variant '" + primary + "'");
  r.finish();
  return c;
}

json rigidbody_json(const RigidBodyConfig& c) {
  json j = common_json(c.common);
  j["inertia_true"] = c.inertia_true;
  j["inertia_false"] = c.inertia_false;
  j["xi"] = c.xi;
  j["varpi"] = c.varpi;
  j["w0"] = c.w0;
  j["estimator"] = estimator_json(c.estimator_order, c.estimator_window);
  j["condition_limit"] = c.condition_limit;
  j["ident_stop"] = c.ident_stop;
  j["ident_min_blocks"] = c.ident_min_blocks;
  j["primary"] = c.primary == RigidBodyConfig::Variant::identified ? "identified"
                 : c.primary == RigidBodyConfig::Variant::true_inertia ? "true_inertia"
                                                                       : "false_inertia";
  return j;
}

// ---- two tank ----

TwoTankConfig parse_twotank(const json& j) {
  TwoTankConfig c;
  Reader r(j, "twotank");
  read_common(r, c.common);
  c.params.outflow = r.get("outflow", c.params.outflow);
  c.params.area = r.get("area", c.params.area);
  c.varpi = r.get("varpi", c.varpi);
  c.fault_w = r.get("fault_w", c.fault_w);
  c.fault_time = r.get("fault_time", c.fault_time);
  c.accommodation_time = r.get("accommodation_time", c.accommodation_time);
  c.x0 = r.get("x0", c.x0);
  if (auto rr = r.object("reference")) {
    c.ref_start = rr->get("start", c.ref_start);
    c.ref_end = rr->get("end", c.ref_end);
    c.ref_t0 = rr->get("t0", c.ref_t0);
    c.ref_t1 = rr->get("t1", c.ref_t1);
    rr->finish();
  }
  const std::array<double, 4> gpi =
      r.get("gpi", std::array<double, 4>{c.gpi_l0, c.gpi_l1, c.gpi_l2, c.gpi_l3});
  c.gpi_l0 = gpi[0];
  c.gpi_l1 = gpi[1];
  c.gpi_l2 = gpi[2];
  c.gpi_l3 = gpi[3];
  read_estimator(r, c.estimator_order, c.estimator_window);
  if (auto mr = r.object("monitor")) {
    c.monitor_order = mr->get("order", c.monitor_order);
    c.monitor_window = mr->get("window", c.monitor_window);
    mr->finish();
  }
  if (auto ir = r.object("inflow_estimator")) {
    c.inflow_order = ir->get("order", c.inflow_order);
    c.inflow_window = ir->get("window", c.inflow_window);
    ir->finish();
  }
  c.varpi_epsilon = r.get("varpi_epsilon", c.varpi_epsilon);
  c.varpi_smoothing = r.get("varpi_smoothing", c.varpi_smoothing);
  c.fault_smoothing = r.get("fault_smoothing", c.fault_smoothing);
  c.fault_clamp_control = r.get("fault_clamp_control", c.fault_clamp_control);
  c.accommodation_ramp = r.get("accommodation_ramp", c.accommodation_ramp);
  c.accommodation = r.get("accommodation", c.accommodation);
  r.finish();
  return c;
}

json twotank_json(const TwoTankConfig& c) {
  json j = common_json(c.common);
  j["outflow"] = c.params.outflow;
  j["area"] = c.params.area;
  j["varpi"] = c.varpi;
  j["fault_w"] = c.fault_w;
  j["fault_time"] = c.fault_time;
  j["accommodation_time"] = c.accommodation_time;
  j["x0"] = c.x0;
  j["reference"] = {{"start", c.ref_start}, {"end", c.ref_end}, {"t0", c.ref_t0},
                    {"t1", c.ref_t1}};
  j["gpi"] = {c.gpi_l0, c.gpi_l1, c.gpi_l2, c.gpi_l3};
  j["estimator"] = estimator_json(c.estimator_order, c.estimator_window);
  j["monitor"] = estimator_json(c.monitor_order, c.monitor_window);
  j["inflow_estimator"] = estimator_json(c.inflow_order, c.inflow_window);
  j["varpi_epsilon"] = c.varpi_epsilon;
  j["varpi_smoothing"] = c.varpi_smoothing;
  j["fault_smoothing"] = c.fault_smoothing;
  j["fault_clamp_control"] = c.fault_clamp_control;
  j["accommodation_ramp"] = c.accommodation_ramp;
  j["accommodation"] = c.accommodation;
  return j;
}

// ---- perturbation attenuation ----

PertConfig parse_pert(const json& j, PertPlantKind kind) {
  PertConfig c;
  c.kind = kind;
  Reader r(j, kind == PertPlantKind::linear ? "pertlin" : "pertnl");
  read_common(r, c.common);
  c.bias = r.get("bias", c.bias);
  c.bias_time = r.get("bias_time", c.bias_time);
  if (auto rr = r.object("reference")) {
    c.ref_amplitude = rr->get("amplitude", c.ref_amplitude);
    c.ref_omega = rr->get("omega", c.ref_omega);
    rr->finish();
  }
  const std::array<double, 4> cp =
      r.get("char_poly", std::array<double, 4>{c.c0, c.c1, c.c2, c.c3});
  c.c0 = cp[0];
  c.c1 = cp[1];
  c.c2 = cp[2];
  c.c3 = cp[3];
  c.x0 = r.get("x0", c.x0);
  read_estimator(r, c.estimator_order, c.estimator_window);
  c.compensation_filter = r.get("compensation_filter", c.compensation_filter);
  c.compensation = r.get("compensation", c.compensation);
  c.divergence_limit = r.get("divergence_limit", c.divergence_limit);
  const std::array<double, 2> mw =
      r.get("metric_window", std::array<double, 2>{c.metric_t0, c.metric_t1});
  c.metric_t0 = mw[0];
  c.metric_t1 = mw[1];
  r.finish();
  return c;
}

json pert_json(const PertConfig& c) {
  json j = common_json(c.common);
  j["bias"] = c.bias;
  j["bias_time"] = c.bias_time;
  j["reference"] = {{"amplitude", c.ref_amplitude}, {"omega", c.ref_omega}};
  j["char_poly"] = {c.c0, c.c1, c.c2, c.c3};
  j["x0"] = c.x0;
  j["estimator"] = estimator_json(c.estimator_order, c.estimator_window);
  j["compensation_filter"] = c.compensation_filter;
  j["compensation"] = c.compensation;
  j["divergence_limit"] = c.divergence_limit;
  j["metric_window"] = {c.metric_t0, c.metric_t1};
  return j;
}

// ---- figures ----

void write_figures(const std::string& scenario, const ScenarioResult& res,
                   const std::filesystem::path& dir) {
  auto emit = [&](const std::string& file, const std::vector<SvgSeries>& series,
                  const std::string& title) {
    write_svg(res.trace, series, SvgStyle{860, 480, title}, (dir / file).string());
  };
  const std::string red = "#c0392b", blue = "#2355a4", green = "#1e8449",
                    black = "#000000";

  if (scenario == "manipulator") {
    emit("output_vs_reference.svg",
         {{"y_ref", "reference", true, black}, {"y", "output", false, blue}},
         "Output and reference trajectory");
    emit("theta_m_online.svg",
         {{"theta_m", "true", true, black}, {"theta_m_e", "on-line estimate", false, blue}},
         "Motor angle, on-line estimation");
    emit("theta_m_offline.svg",
         {{"theta_m", "true", true, black},
          {"theta_m_e_offline", "off-line estimate", false, green}},
         "Motor angle, off-line estimation");
    emit("ydd_estimate.svg",
         {{"ydd", "true", true, black}, {"ydd_e", "on-line estimate", false, blue}},
         "Second derivative of the output");
    emit("control.svg", {{"u", "control", false, blue}}, "Control");
  } else if (scenario == "rigidbody") {
    emit("inertia_estimates.svg",
         {{"I1_e", "I1 estimate", false, blue}, {"I2_e", "I2 estimate", false, green},
          {"I3_e", "I3 estimate", false, red}},
         "Parametric estimation");
    emit("angular_velocities.svg",
         {{"w1", "w1", false, blue}, {"w2", "w2", false, green}, {"w3", "w3", false, red}},
         "Feedback stabilization");
    emit("stabilization_comparison.svg",
         {{"wabs_identified", "with estimation", false, blue},
          {"wabs_false", "false values", true, red}},
         "Stabilization with and without parametric estimation");
  } else if (scenario == "twotank") {
    emit("output_vs_reference.svg",
         {{"y_ref", "reference", true, black},
          {"y_accommodated", "with accommodation", false, blue},
          {"y_unaccommodated", "without accommodation", false, red}},
         "Output with and without fault accommodation");
    emit("fault_estimate.svg", {{"w_hat_accommodated", "fault estimate", false, blue}},
         "Actuator-fault estimation");
    emit("perturbation_estimate.svg", {{"varpi_hat", "perturbation estimate", false, blue}},
         "Perturbation estimation");
  } else {
    emit("output_vs_reference.svg",
         {{"y_ref", "reference", true, black},
          {"y_compensated", "with attenuation", false, blue},
          {"y_uncompensated", "without attenuation", false, red}},
         "Output with and without perturbation attenuation");
    emit("perturbation_estimate.svg",
         {{"z", "perturbation", true, black}, {"z_e", "estimate", false, blue}},
         "Perturbation and its estimate");
  }
}

}  // namespace

bool is_known_scenario(const std::string& id) {
  return id == "manipulator" || id == "rigidbody" || id == "twotank" ||
         id == "pertlin" || id == "pertnl";
}

std::string simulate_to_dir(const std::string& scenario, const std::string& config_json,
                            const SimulateOverrides& overrides,
                            const std::string& out_dir) {
  if (!is_known_scenario(scenario))
    throw std::invalid_argument("unknown scenario '" + scenario + "'");

  json doc = json::object();
  if (!config_json.empty()) {
    doc = json::parse(config_json, nullptr, false);
    if (doc.is_discarded()) throw std::invalid_argument("config is not valid JSON");
  }

  ScenarioResult res;
  json resolved;
  std::uint64_t seed = 0;

  if (scenario == "manipulator") {
    auto cfg = parse_manipulator(doc);
    if (overrides.seed) cfg.common.seed = *overrides.seed;
    resolved = manipulator_json(cfg);
    seed = cfg.common.seed;
    res = run_manipulator(cfg);
  } else if (scenario == "rigidbody") {
    auto cfg = parse_rigidbody(doc);
    if (overrides.seed) cfg.common.seed = *overrides.seed;
    resolved = rigidbody_json(cfg);
    seed = cfg.common.seed;
    res = run_rigidbody(cfg);
  } else if (scenario == "twotank") {
    auto cfg = parse_twotank(doc);
    if (overrides.seed) cfg.common.seed = *overrides.seed;
    if (overrides.accommodation) cfg.accommodation = *overrides.accommodation;
    resolved = twotank_json(cfg);
    seed = cfg.common.seed;
    res = run_twotank(cfg);
  } else {
    auto cfg = parse_pert(
        doc, scenario == "pertlin" ? PertPlantKind::linear : PertPlantKind::nonlinear);
    if (overrides.seed) cfg.common.seed = *overrides.seed;
    if (overrides.compensation) cfg.compensation = *overrides.compensation;
    resolved = pert_json(cfg);
    seed = cfg.common.seed;
    res = run_pert(cfg);
  }

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_csv(res.trace, (dir / "trace.csv").string());
  write_figures(scenario, res, dir);

  json metrics = json::object();
  for (const auto& m : res.metrics) metrics[m.name] = m.value;
  json out = {{"scenario", scenario}, {"seed", seed}, {"config", resolved},
              {"metrics", metrics}};
  const std::string text = out.dump(2) + "\n";
  std::ofstream f(dir / "metrics.json", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write metrics.json in " + out_dir);
  f << text;
  return text;
}

void diff_csv(const std::string& in_path, const std::string& column, int order,
              int integral_order, double window, bool time_reversed,
              bool fd_baseline, const std::string& out_path) {
  SimTrace in = read_csv(in_path);
  if (!in.has(column))
    throw std::invalid_argument("input has no column named '" + column + "'");
  const auto& t = in.time();
  const auto& x = in.channel(column);
  if (t.size() < 2) throw std::invalid_argument("input holds fewer than two samples");
  const double h = t[1] - t[0];
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs(t[i] - t[i - 1] - h) > 1e-9)
      throw std::invalid_argument("input time grid is not uniform");

  auto kernel = std::make_shared<const EstimatorKernel>(
      EstimatorConfig{order, integral_order, window, h});
  StreamingDifferentiator diff(
      kernel, time_reversed ? StreamMode::time_reversed : StreamMode::forward);

  std::vector<double> anchor_t;
  std::vector<std::vector<double>> d(order + 1);
  std::vector<double> fd;
  const std::size_t lag = time_reversed ? 0 : kernel->intervals();
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto est = diff.push_sample(t[i], x[i]);
    if (!est) continue;
    anchor_t.push_back(est->anchor_time);
    for (int v = 0; v <= order; ++v) d[v].push_back(est->values[v]);
    if (fd_baseline) {
      const std::size_t a = i - lag;  // anchor sample index
      double fd1;
      if (a == 0)
        fd1 = (x[1] - x[0]) / h;
      else if (a + 1 >= t.size())
        fd1 = (x[a] - x[a - 1]) / h;
      else
        fd1 = (x[a + 1] - x[a - 1]) / (2.0 * h);
      fd.push_back(fd1);
    }
  }

  SimTrace out;
  out.set_time(std::move(anchor_t));
  for (int v = 0; v <= order; ++v) out.add_channel("d" + std::to_string(v)) = d[v];
  if (fd_baseline) out.add_channel("fd_d1") = fd;
  write_csv(out, out_path);
}

}  // namespace algdiff
