// Copyright 2026 The Flotilla Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flotilla/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "flotilla/error.hpp"

namespace flotilla {

TargetSchedule::TargetSchedule(std::vector<std::pair<double, double>> steps)
    : steps_(std::move(steps)) {
  if (steps_.empty()) throw ParameterError("target schedule is empty");
  if (steps_.front().first != 0.0) {
    throw ParameterError("target schedule must start at t = 0");
  }
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (!std::isfinite(steps_[i].first) || !std::isfinite(steps_[i].second)) {
      throw ParameterError("target schedule values must be finite");
    }
    if (i > 0 && !(steps_[i].first > steps_[i - 1].first)) {
      throw ParameterError("target schedule times must increase");
    }
  }
}

double TargetSchedule::At(double t) const {
  double value = steps_.front().second;
  for (const auto& [time, v] : steps_) {
    if (time > t) break;
    value = v;
  }
  return value;
}

int Scenario::steps_per_cycle() const {
  return static_cast<int>(std::lround(cycle_period / dt));
}

std::int64_t Scenario::total_steps() const {
  return static_cast<std::int64_t>(std::ceil(duration / dt - 1e-9));
}

nlohmann::json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"cannot open " + path.string()});
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError({path.string() + ": " + e.what()});
  }
}

namespace {

const std::set<std::string> kKnownKeys = {
    "name",          "configuration",   "configuration_file",
    "mode",          "targets",         "duration_s",
    "cycle_period_s", "dt_s",           "gains",
    "initial_state", "thrust_model",    "drag",
    "controller_drag", "sway_drag_kg_per_m", "v_max_m_s",
    "thrust_ripple", "noise",           "certificate",
    "log_every"};

// Collects every problem instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

  void Issue(std::string msg) { issues_.push_back(std::move(msg)); }

  std::optional<double> Number(const nlohmann::json& obj, const std::string& key,
                               const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      Issue(path + key + " must be a finite number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  double Number(const nlohmann::json& obj, const std::string& key,
                const std::string& path, double fallback) {
    return Number(obj, key, path).value_or(fallback);
  }

  std::optional<double> Positive(const nlohmann::json& obj,
                                 const std::string& key,
                                 const std::string& path) {
    auto v = Number(obj, key, path);
    if (v && !(*v > 0.0)) {
      Issue(path + key + " must be positive");
      return std::nullopt;
    }
    return v;
  }

  const nlohmann::json* Object(const nlohmann::json& obj, const std::string& key,
                               const std::string& path) {
    if (!obj.contains(key)) return nullptr;
    if (!obj.at(key).is_object()) {
      Issue(path + key + " must be an object");
      return nullptr;
    }
    return &obj.at(key);
  }

  std::optional<std::vector<double>> Array(const nlohmann::json& obj,
                                           const std::string& key,
                                           const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    std::vector<double> out;
    if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number()) break;
        out.push_back(e.get<double>());
      }
      if (out.size() == v.size() && !out.empty()) return out;
    }
    Issue(path + key + " must be a non-empty array of numbers");
    return std::nullopt;
  }

  std::optional<TargetSchedule> Schedule(const nlohmann::json& obj,
                                         const std::string& key,
                                         const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    std::vector<std::pair<double, double>> steps;
    bool shape_ok = v.is_array() && !v.empty();
    if (shape_ok) {
      for (const auto& e : v) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
            !e[1].is_number()) {
          shape_ok = false;
          break;
        }
        steps.emplace_back(e[0].get<double>(), e[1].get<double>());
      }
    }
    if (!shape_ok) {
      Issue(path + key + " must be a non-empty array of [t, value] pairs");
      return std::nullopt;
    }
    try {
      return TargetSchedule(std::move(steps));
    } catch (const ParameterError& e) {
      Issue(path + key + ": " + e.what());
      return std::nullopt;
    }
  }

 private:
  std::vector<std::string>& issues_;
};

nlohmann::json ScheduleJson(const TargetSchedule& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [t, v] : s.steps()) out.push_back({t, v});
  return out;
}

}  // namespace

Scenario ParseScenario(const nlohmann::json& j,
                       const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ValidationError({"scenario must be a JSON object"});
  std::vector<std::string> issues;
  Reader rd(issues);
  Scenario sc;

  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.contains(key)) rd.Issue("unknown field " + key);
  }
  sc.name = j.value("name", std::string("scenario"));

  // Configuration, inline or by reference.
  std::optional<ConfigurationFile> config;
  try {
    if (j.contains("configuration")) {
      config = ParseConfiguration(j.at("configuration"));
    } else if (j.contains("configuration_file")) {
      if (!j.at("configuration_file").is_string()) {
        rd.Issue("configuration_file must be a path string");
      } else {
        config = ParseConfiguration(
            ReadJsonFile(base_dir / j.at("configuration_file").get<std::string>()));
      }
    } else {
      rd.Issue("missing field configuration (or configuration_file)");
    }
  } catch (const ValidationError& e) {
    for (const auto& i : e.issues()) rd.Issue(i);
  } catch (const std::invalid_argument& e) {
    rd.Issue(std::string("configuration: ") + e.what());
  }

  if (!j.contains("mode")) {
    rd.Issue("missing field mode (velocity, yaw or combined)");
  } else if (!j.at("mode").is_string()) {
    rd.Issue("mode must be a string");
  } else {
    try {
      sc.mode = ParseControlMode(j.at("mode").get<std::string>());
    } catch (const ParameterError& e) {
      rd.Issue(e.what());
    }
  }

  if (auto d = rd.Positive(j, "duration_s", "")) {
    sc.duration = *d;
  } else if (!j.contains("duration_s")) {
    rd.Issue("missing field duration_s");
  }
  sc.cycle_period = rd.Positive(j, "cycle_period_s", "").value_or(kDefaultCyclePeriod);
  sc.dt = rd.Positive(j, "dt_s", "").value_or(sc.cycle_period / 150.0);
  {
    const double ratio = sc.cycle_period / sc.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      rd.Issue("dt_s must divide cycle_period_s into whole steps");
    } else if (std::round(ratio) < 100.0) {
      rd.Issue("dt_s must be at most cycle_period_s / 100");
    }
  }

  // Initial state.
  if (const auto* init = rd.Object(j, "initial_state", "")) {
    sc.initial.x = rd.Number(*init, "x", "initial_state.", 0.0);
    sc.initial.y = rd.Number(*init, "y", "initial_state.", 0.0);
    sc.initial.yaw = rd.Number(*init, "yaw", "initial_state.", 0.0);
    sc.initial.v_y = rd.Number(*init, "v_y", "initial_state.", 0.0);
    sc.initial.v_x = rd.Number(*init, "v_x", "initial_state.", 0.0);
    sc.initial.omega = rd.Number(*init, "omega", "initial_state.", 0.0);
  }

  // Targets: the active loops need a schedule.
  const bool wants_velocity = sc.mode != ControlMode::kYawOnly;
  const bool wants_yaw = sc.mode != ControlMode::kVelocityOnly;
  if (!j.contains("targets")) {
    rd.Issue("missing field targets");
  } else if (const auto* tg = rd.Object(j, "targets", "")) {
    if (auto s = rd.Schedule(*tg, "velocity", "targets.")) {
      sc.velocity = *s;
    } else if (wants_velocity && !tg->contains("velocity")) {
      rd.Issue("missing field targets.velocity");
    }
    if (auto s = rd.Schedule(*tg, "yaw", "targets.")) {
      sc.yaw = *s;
    } else if (wants_yaw && !tg->contains("yaw")) {
      rd.Issue("missing field targets.yaw");
    }
  }
  if (sc.velocity.empty()) sc.velocity = TargetSchedule({{0.0, 0.0}});
  if (sc.yaw.empty()) sc.yaw = TargetSchedule({{0.0, sc.initial.yaw}});

  if (const auto* g = rd.Object(j, "gains", "")) {
    sc.gains.kp_v = rd.Number(*g, "kp_v", "gains.", sc.gains.kp_v);
    sc.gains.kd_v = rd.Number(*g, "kd_v", "gains.", sc.gains.kd_v);
    sc.gains.kp_theta = rd.Number(*g, "kp_theta", "gains.", sc.gains.kp_theta);
    sc.gains.kd_theta = rd.Number(*g, "kd_theta", "gains.", sc.gains.kd_theta);
    try {
      sc.gains.Validate();
    } catch (const ParameterError& e) {
      rd.Issue(std::string("gains: ") + e.what());
    }
  }

  if (const auto* tm = rd.Object(j, "thrust_model", "")) {
    auto& m = sc.thrust;
    m.a_dead = rd.Number(*tm, "a_dead", "thrust_model.", m.a_dead);
    m.a_max = rd.Number(*tm, "a_max", "thrust_model.", m.a_max);
    if (tm->contains("k_f") && tm->contains("calibration_margin")) {
      rd.Issue("thrust_model: give k_f or calibration_margin, not both");
    }
    if (auto margin = rd.Positive(*tm, "calibration_margin", "thrust_model.")) {
      m.k_f = CalibratedThrustSlope(*margin, m.a_dead, m.a_max);
    }
    m.k_f = rd.Number(*tm, "k_f", "thrust_model.", m.k_f);
    if (auto a = rd.Array(*tm, "alpha", "thrust_model.")) m.alpha = *a;
    if (auto g = rd.Array(*tm, "gamma", "thrust_model.")) m.gamma = *g;
  }
  try {
    sc.thrust.Validate();
  } catch (const ParameterError& e) {
    rd.Issue(std::string("thrust_model: ") + e.what());
  }

  sc.v_max = rd.Positive(j, "v_max_m_s", "").value_or(kDefaultMaxVelocity);
  if (j.contains("thrust_ripple")) {
    if (j.at("thrust_ripple").is_boolean()) {
      sc.thrust_ripple = j.at("thrust_ripple").get<bool>();
    } else {
      rd.Issue("thrust_ripple must be a boolean");
    }
  }
  if (j.contains("log_every")) {
    if (j.at("log_every").is_number_integer() && j.at("log_every").get<int>() >= 1) {
      sc.log_every = j.at("log_every").get<int>();
    } else {
      rd.Issue("log_every must be an integer >= 1");
    }
  }

  if (const auto* nz = rd.Object(j, "noise", "")) {
    for (auto [key, field] :
         {std::pair{"velocity_std", &sc.noise.velocity_std},
          std::pair{"yaw_std", &sc.noise.yaw_std},
          std::pair{"omega_std", &sc.noise.omega_std}}) {
      *field = rd.Number(*nz, key, "noise.", 0.0);
      if (*field < 0.0) rd.Issue(std::string("noise.") + key + " must be >= 0");
    }
  }

  if (const auto* cert = rd.Object(j, "certificate", "")) {
    if (cert->contains("enabled")) {
      if (cert->at("enabled").is_boolean()) {
        sc.certify = cert->at("enabled").get<bool>();
      } else {
        rd.Issue("certificate.enabled must be a boolean");
      }
    }
    auto& o = sc.certificate;
    o.samples_per_cycle = static_cast<int>(rd.Number(
        *cert, "samples_per_cycle", "certificate.", o.samples_per_cycle));
    o.boundary_samples = static_cast<int>(rd.Number(
        *cert, "boundary_samples", "certificate.", o.boundary_samples));
    o.gamma_limit = rd.Number(*cert, "gamma_limit", "certificate.", o.gamma_limit);
    if (const auto* tail = rd.Object(*cert, "tail", "certificate.")) {
      o.shape.r_t = rd.Number(*tail, "r_t", "certificate.tail.", o.shape.r_t);
      o.shape.r_p = rd.Number(*tail, "r_p", "certificate.tail.", o.shape.r_p);
      o.shape.theta_w =
          rd.Number(*tail, "theta_w", "certificate.tail.", o.shape.theta_w);
    }
  }
  try {
    sc.certificate.Validate();
    if (sc.certificate.boundary_samples < 1440) {
      rd.Issue("certificate.boundary_samples must be >= 1440");
    }
  } catch (const ParameterError& e) {
    rd.Issue(std::string("certificate: ") + e.what());
  }

  // Plant: mass and inertia from the lattice, drag from the table or given.
  std::string drag_source = "table";
  std::optional<std::string> table_file;
  if (config) {
    const auto& cfg = config->configuration;
    const MassProperties mp =
        AggregateInertia(cfg, config->module_mass.value_or(kModuleMass),
                         config->module_inertia.value_or(kModuleInertia));
    sc.plant.mass = mp.mass;
    sc.plant.inertia = mp.inertia;
    const nlohmann::json drag =
        j.contains("drag") ? j.at("drag") : nlohmann::json::object();
    if (!drag.is_object()) {
      rd.Issue("drag must be an object");
    } else {
      drag_source = drag.value("source", std::string("table"));
      if (drag_source == "table") {
        try {
          DragTable table = DragTable::Default();
          if (drag.contains("table_file")) {
            table_file = drag.at("table_file").get<std::string>();
            table = DragTable::FromJson(ReadJsonFile(base_dir / *table_file));
          }
          const DragCoefficients c = DragLookup(table, cfg.Widths());
          sc.plant.c_l = c.c_l;
          sc.plant.c_r = c.c_r;
        } catch (const ValidationError& e) {
          for (const auto& i : e.issues()) rd.Issue("drag: " + i);
        } catch (const std::exception& e) {
          rd.Issue(std::string("drag: ") + e.what());
        }
      } else if (drag_source == "explicit") {
        auto cl = rd.Positive(drag, "c_l", "drag.");
        auto cr = rd.Positive(drag, "c_r", "drag.");
        if (!cl || !cr) rd.Issue("drag.c_l and drag.c_r are required when explicit");
        sc.plant.c_l = cl.value_or(0.0);
        sc.plant.c_r = cr.value_or(0.0);
        sc.plant.mass = rd.Positive(drag, "mass", "drag.").value_or(sc.plant.mass);
        sc.plant.inertia =
            rd.Positive(drag, "inertia", "drag.").value_or(sc.plant.inertia);
      } else {
        rd.Issue("drag.source must be table or explicit");
      }
    }
  }
  sc.controller_model = sc.plant;
  if (const auto* cd = rd.Object(j, "controller_drag", "")) {
    sc.controller_model.c_l =
        rd.Positive(*cd, "c_l", "controller_drag.").value_or(sc.plant.c_l);
    sc.controller_model.c_r =
        rd.Positive(*cd, "c_r", "controller_drag.").value_or(sc.plant.c_r);
    sc.controller_model.mass =
        rd.Positive(*cd, "mass", "controller_drag.").value_or(sc.plant.mass);
    sc.controller_model.inertia =
        rd.Positive(*cd, "inertia", "controller_drag.").value_or(sc.plant.inertia);
  }
  sc.c_sway = sc.plant.c_l;
  if (auto cs = rd.Number(j, "sway_drag_kg_per_m", "")) {
    if (*cs < 0.0) rd.Issue("sway_drag_kg_per_m must be >= 0");
    sc.c_sway = *cs;
  }

  if (!issues.empty()) throw ValidationError(issues);
  sc.configuration = std::move(*config);

  // Canonical form with every default spelled out.
  nlohmann::json c;
  c["name"] = sc.name;
  c["configuration"] = ToJson(sc.configuration);
  c["mode"] = ToString(sc.mode);
  c["targets"] = {{"velocity", ScheduleJson(sc.velocity)},
                  {"yaw", ScheduleJson(sc.yaw)}};
  c["duration_s"] = sc.duration;
  c["cycle_period_s"] = sc.cycle_period;
  c["dt_s"] = sc.dt;
  c["gains"] = {{"kp_v", sc.gains.kp_v},
                {"kd_v", sc.gains.kd_v},
                {"kp_theta", sc.gains.kp_theta},
                {"kd_theta", sc.gains.kd_theta}};
  c["initial_state"] = {{"x", sc.initial.x},     {"y", sc.initial.y},
                        {"yaw", sc.initial.yaw}, {"v_y", sc.initial.v_y},
                        {"v_x", sc.initial.v_x}, {"omega", sc.initial.omega}};
  c["thrust_model"] = {{"k_f", sc.thrust.k_f},       {"a_dead", sc.thrust.a_dead},
                       {"a_max", sc.thrust.a_max},   {"alpha", sc.thrust.alpha},
                       {"gamma", sc.thrust.gamma}};
  c["plant"] = {{"mass", sc.plant.mass},
                {"inertia", sc.plant.inertia},
                {"c_l", sc.plant.c_l},
                {"c_r", sc.plant.c_r},
                {"drag_source", drag_source}};
  c["controller_model"] = {{"mass", sc.controller_model.mass},
                           {"inertia", sc.controller_model.inertia},
                           {"c_l", sc.controller_model.c_l},
                           {"c_r", sc.controller_model.c_r}};
  c["sway_drag_kg_per_m"] = sc.c_sway;
  c["v_max_m_s"] = sc.v_max;
  c["thrust_ripple"] = sc.thrust_ripple;
  c["noise"] = {{"velocity_std", sc.noise.velocity_std},
                {"yaw_std", sc.noise.yaw_std},
                {"omega_std", sc.noise.omega_std}};
  c["certificate"] = {{"enabled", sc.certify},
                      {"samples_per_cycle", sc.certificate.samples_per_cycle},
                      {"boundary_samples", sc.certificate.boundary_samples},
                      {"gamma_limit", sc.certificate.gamma_limit},
                      {"tail",
                       {{"r_t", sc.certificate.shape.r_t},
                        {"r_p", sc.certificate.shape.r_p},
                        {"theta_w", sc.certificate.shape.theta_w}}}};
  c["log_every"] = sc.log_every;
  sc.canonical = std::move(c);
  return sc;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  return ParseScenario(ReadJsonFile(path), path.parent_path());
}

std::string ScenarioHash(const Scenario& s) {
  const std::string text = s.canonical.dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace flotilla
