#include "reachguard/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace reachguard {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(std::string(what) + " must be a list of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

PidGains parse_gains(const json& j) {
  PidGains g;
  g.kp_x = get_or(j, "kp_x", g.kp_x);
  g.ki_x = get_or(j, "ki_x", g.ki_x);
  g.kd_x = get_or(j, "kd_x", g.kd_x);
  g.kp_y = get_or(j, "kp_y", g.kp_y);
  g.ki_y = get_or(j, "ki_y", g.ki_y);
  g.kd_y = get_or(j, "kd_y", g.kd_y);
  g.output_clamp = get_or(j, "output_clamp", g.output_clamp);
  return g;
}

RuntimeBudget parse_budget(const json& j) {
  const auto mode = get_or<std::string>(j, "mode", "deterministic");
  if (mode == "deterministic") return RuntimeBudget::passes(get_or(j, "passes", 3));
  if (mode == "wallclock") return RuntimeBudget::wallclock_ms(get_or(j, "ms", 10.0));
  throw ConfigError("budget mode must be deterministic or wallclock, got '" + mode + "'");
}

SensorConfig parse_sensor(const json& j) {
  SensorConfig s;
  s.gps_error = get_or(j, "gps_error", s.gps_error);
  if (j.contains("bloat")) s.bloat = number_list(j.at("bloat"), "sensor.bloat");
  s.noise_fraction = get_or(j, "noise_fraction", s.noise_fraction);
  return s;
}

AgentConfig parse_agent(const json& j) {
  AgentConfig a;
  if (!j.contains("id")) throw ConfigError("agent without id");
  a.id = j.at("id").get<AgentId>();
  a.model = get_or<std::string>(j, "model", a.model);
  if (j.contains("initial_state")) a.initial_state = number_list(j.at("initial_state"), "initial_state");
  if (j.contains("initial_jitter")) {
    a.initial_jitter = number_list(j.at("initial_jitter"), "initial_jitter");
  }
  if (j.contains("waypoints")) {
    for (const auto& w : j.at("waypoints")) {
      const auto xy = number_list(w, "waypoint");
      if (xy.size() != 2) throw ConfigError("waypoint must be [x, y]");
      a.waypoints.push_back({xy[0], xy[1]});
    }
  }
  a.waypoint_tolerance = get_or(j, "waypoint_tolerance", a.waypoint_tolerance);
  if (j.contains("gains")) a.gains = parse_gains(j.at("gains"));
  a.delta = get_or(j, "delta", a.delta);
  if (j.contains("clock_offset") && !j.at("clock_offset").is_null()) {
    a.clock_offset = j.at("clock_offset").get<double>();
  }
  a.control_period = get_or(j, "control_period", a.control_period);
  a.horizon = get_or(j, "horizon", a.horizon);
  a.h0 = get_or(j, "h0", a.h0);
  if (j.contains("budget")) a.budget = parse_budget(j.at("budget"));
  if (j.contains("sensor")) a.sensor = parse_sensor(j.at("sensor"));
  if (j.contains("local_unsafe")) a.local_unsafe = parse_constraints(j.at("local_unsafe"));
  const auto input = get_or<std::string>(j, "reach_input", "envelope");
  if (input == "envelope") {
    a.reach_input = ReachInput::envelope;
  } else if (input == "held") {
    a.reach_input = ReachInput::held;
  } else {
    throw ConfigError("reach_input must be envelope or held, got '" + input + "'");
  }
  if (j.contains("timing_profile")) a.timing_profile = parse_timing_profile(j.at("timing_profile"));
  return a;
}

ChannelConfig parse_channel(const json& j) {
  ChannelConfig c;
  c.min_delay = get_or(j, "min_delay", c.min_delay);
  c.max_delay = get_or(j, "max_delay", c.max_delay);
  c.drop_prob = get_or(j, "drop_prob", c.drop_prob);
  c.corrupt_prob = get_or(j, "corrupt_prob", c.corrupt_prob);
  const auto src = get_or<std::string>(j, "delay_source", "law");
  if (src == "law") {
    c.delay_source = DelaySource::law;
  } else if (src == "profile") {
    c.delay_source = DelaySource::profile;
  } else {
    throw ConfigError("delay_source must be law or profile, got '" + src + "'");
  }
  return c;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

TimingProfile parse_timing_profile(const json& j) {
  try {
    TimingProfile p;
    p.tau_e = get_or(j, "tau_e", 0.0);
    p.tau_d = get_or(j, "tau_d", 0.0);
    p.tau_tf = get_or(j, "tau_tf", 0.0);
    p.tau_c = get_or(j, "tau_c", 0.0);
    p.tau_control = get_or(j, "tau_control", 0.0);
    p.t_runtime = get_or(j, "t_runtime", 0.0);
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("timing profile: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("timing profile: ") + e.what());
  }
}

LinearConstraintSet parse_constraints(const json& j) {
  if (!j.is_array()) throw ConfigError("constraint set must be a list of {coeffs, bound} rows");
  std::vector<HalfSpace> rows;
  for (const auto& r : j) {
    if (!r.contains("coeffs") || !r.contains("bound")) {
      throw ConfigError("constraint row needs coeffs and bound");
    }
    rows.push_back({number_list(r.at("coeffs"), "coeffs"), r.at("bound").get<double>()});
  }
  try {
    return LinearConstraintSet(std::move(rows));
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("constraint set: ") + e.what());
  }
}

void ScenarioConfig::validate() const {
  require(duration > 0.0 && std::isfinite(duration), "duration must be positive");
  require(truth_dt > 0.0, "truth_dt must be positive");
  require(safe_distance >= 0.0, "safe_distance must be non-negative");
  require(!agents.empty(), "scenario needs at least one agent");
  require(!position_axes.empty(), "position_axes must not be empty");
  try {
    timing_profile.validate();
    ChannelParams{channel.min_delay, channel.max_delay, channel.drop_prob, channel.corrupt_prob, 1, {}}
        .validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }

  std::set<AgentId> ids;
  std::size_t joint_dim = 0;
  for (const auto& a : agents) {
    const std::string who = "agent " + std::to_string(a.id) + ": ";
    require(ids.insert(a.id).second, who + "duplicate id");
    ModelSpec m;
    try {
      m = model_by_name(a.model);
    } catch (const InvalidInput& e) {
      throw ConfigError(who + e.what());
    }
    joint_dim += m.state_dim;
    require(a.initial_state.size() == m.state_dim,
            who + "initial_state needs " + std::to_string(m.state_dim) + " values");
    require(a.initial_jitter.empty() || a.initial_jitter.size() == m.state_dim,
            who + "initial_jitter has the wrong length");
    require(std::all_of(a.initial_jitter.begin(), a.initial_jitter.end(),
                        [](double v) { return v >= 0.0; }),
            who + "initial_jitter must be non-negative");
    require(a.control_period > 0.0, who + "control_period must be positive");
    require(a.horizon > a.control_period, who + "horizon must exceed the control period");
    require(a.h0 > 0.0, who + "h0 must be positive");
    require(a.delta >= 0.0, who + "delta must be non-negative");
    require(!a.clock_offset || std::abs(*a.clock_offset) <= a.delta,
            who + "clock_offset exceeds delta");
    require(a.waypoint_tolerance > 0.0, who + "waypoint_tolerance must be positive");
    require(a.sensor.bloat.empty() || a.sensor.bloat.size() == m.state_dim,
            who + "sensor.bloat has the wrong length");
    require(std::all_of(a.sensor.bloat.begin(), a.sensor.bloat.end(),
                        [](double v) { return v >= 0.0; }),
            who + "sensor.bloat must be non-negative");
    require(a.sensor.gps_error >= 0.0 && a.sensor.gps_error <= 0.5,
            who + "sensor.gps_error must lie in [0, 0.5]");
    require(a.sensor.noise_fraction >= 0.0 && a.sensor.noise_fraction <= 0.5,
            who + "sensor.noise_fraction must lie in [0, 0.5]");
    require(!a.local_unsafe || a.local_unsafe->dim() == m.state_dim,
            who + "local_unsafe has the wrong number of columns");
    require(a.waypoints.empty() || m.name == "quadcopter4d",
            who + "waypoints need the quadcopter4d model");
    for (std::size_t ax : position_axes) {
      require(ax < m.state_dim, who + "position axis out of range");
    }
    try {
      a.gains.validate();
      a.budget.validate();
      if (a.timing_profile) a.timing_profile->validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(who + e.what());
    }
  }
  if (global_unsafe) {
    require(global_unsafe->dim() == joint_dim,
            "global_unsafe needs " + std::to_string(joint_dim) + " columns (agent blocks by id)");
  }
}

ScenarioConfig parse_scenario(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    ScenarioConfig c;
    c.name = get_or<std::string>(j, "name", c.name);
    c.duration = get_or(j, "duration", c.duration);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.safe_distance = get_or(j, "safe_distance", c.safe_distance);
    if (j.contains("position_axes")) {
      c.position_axes = j.at("position_axes").get<std::vector<std::size_t>>();
    }
    c.truth_dt = get_or(j, "truth_dt", c.truth_dt);
    if (j.contains("channel")) c.channel = parse_channel(j.at("channel"));
    if (j.contains("timing_profile")) c.timing_profile = parse_timing_profile(j.at("timing_profile"));
    if (j.contains("global_unsafe")) c.global_unsafe = parse_constraints(j.at("global_unsafe"));
    const json defaults = j.value("defaults", json::object());
    if (!j.contains("agents") || !j.at("agents").is_array()) {
      throw ConfigError("scenario needs an agents list");
    }
    for (const auto& a : j.at("agents")) {
      json merged = defaults;
      merged.update(a);
      c.agents.push_back(parse_agent(merged));
    }
    std::sort(c.agents.begin(), c.agents.end(),
              [](const AgentConfig& x, const AgentConfig& y) { return x.id < y.id; });
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_json_file(path));
}

}  // namespace reachguard
