#pragma once

// Scenario configuration and its JSON schema.
//
// Top level:
//   name, duration (s), seed, safe_distance, position_axes ([0, 2]),
//   truth_dt (s, 1e-3), channel {...}, timing_profile {...} (ms),
//   global_unsafe [{coeffs, bound}, ...], defaults {...}, agents [{...}, ...]
// Every agent object is merged over `defaults` (agent keys win). Agent keys:
//   id, model, initial_state, initial_jitter, waypoints [[x, y], ...],
//   waypoint_tolerance, gains {kp_x, ki_x, kd_x, kp_y, ki_y, kd_y, output_clamp},
//   delta, clock_offset, control_period, horizon, h0,
//   budget {mode: deterministic|wallclock, passes | ms},
//   sensor {gps_error, bloat, noise_fraction}, local_unsafe [...],
//   reach_input: envelope|held, timing_profile {...}
// channel: min_delay, max_delay (s), drop_prob, corrupt_prob,
//   delay_source: law|profile (profile uses the recipient's tau_tf).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reachguard/comm.hpp"
#include "reachguard/dynamics.hpp"
#include "reachguard/reach.hpp"
#include "reachguard/verify.hpp"

namespace reachguard {

// Which inputs the reach computation assumes over its horizon: every input
// the controller may output (envelope) or only the input just applied (held).
enum class ReachInput { envelope, held };

enum class DelaySource { law, profile };

struct SensorConfig {
  double gps_error = 0.02;          // fraction of speed, quadcopter only
  std::vector<double> bloat;        // absolute per-axis bloat added on top
  double noise_fraction = 0.5;      // measurement noise as a fraction of the bloat
};

struct AgentConfig {
  AgentId id = 0;
  std::string model = "quadcopter4d";
  std::vector<double> initial_state;
  std::vector<double> initial_jitter;  // seeded uniform +- per component
  std::vector<Waypoint> waypoints;
  double waypoint_tolerance = 10.0;
  PidGains gains;
  double delta = 0.003;
  std::optional<double> clock_offset;  // seeded in [-delta, delta] when absent
  double control_period = 0.2;
  double horizon = 2.0;
  double h0 = 0.1;
  RuntimeBudget budget;
  SensorConfig sensor;
  std::optional<LinearConstraintSet> local_unsafe;
  ReachInput reach_input = ReachInput::envelope;
  std::optional<TimingProfile> timing_profile;
};

struct ChannelConfig {
  double min_delay = 0.0005;
  double max_delay = 0.003;
  double drop_prob = 0.0;
  double corrupt_prob = 0.0;
  DelaySource delay_source = DelaySource::law;
};

struct ScenarioConfig {
  std::string name = "scenario";
  double duration = 10.0;
  std::uint64_t seed = 1;
  double safe_distance = 100.0;
  std::vector<std::size_t> position_axes{0, 2};
  double truth_dt = 1e-3;
  ChannelConfig channel;
  TimingProfile timing_profile{0.058, 0.0169, 2.64, 0.04, 0.0, 10.0};
  std::optional<LinearConstraintSet> global_unsafe;
  std::vector<AgentConfig> agents;

  // Throws ConfigError on a violated invariant.
  void validate() const;
  const TimingProfile& profile_of(const AgentConfig& a) const {
    return a.timing_profile ? *a.timing_profile : timing_profile;
  }
};

// Throws ConfigError with a readable message on any schema problem.
ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

TimingProfile parse_timing_profile(const nlohmann::json& j);
LinearConstraintSet parse_constraints(const nlohmann::json& j);

}  // namespace reachguard
