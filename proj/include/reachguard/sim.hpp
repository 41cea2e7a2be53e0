#pragma once

// Deterministic discrete-event simulation of N agents running the
// sense -> control -> reach -> broadcast -> decode -> verify loop.
//
// Control ticks happen at local times k * T_c (the first one at global 0).
// Downstream events follow the timing profile: reach_done after t_runtime,
// send after tau_e, deliver after the channel delay, decode after the
// recipient's tau_d and the pair check after its tau_c. Events are processed
// in (time, scheduling order) and only while time <= duration.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reachguard/kernels.hpp"
#include "reachguard/scenario.hpp"
#include "reachguard/truth.hpp"

namespace reachguard {

enum class EventKind {
  reach_start,
  reach_done,
  send,
  deliver,
  decode,
  pair_check,
  global_check,
  waypoint_reached,
  local_unsafe,
  budget_overrun,
  stale_msg,
  malformed_msg,
};

const char* to_string(EventKind k);
// Throws InvalidInput on an unknown name.
EventKind event_kind_from(std::string_view name);

struct EventRecord {
  double time = 0.0;  // global
  AgentId agent = 0;
  EventKind kind = EventKind::reach_start;
  nlohmann::json payload = nlohmann::json::object();
};

struct SimOptions {
  // Keep every ReachResult with its global start (needed by the audit).
  bool keep_reach_records = true;
};

struct SimRun {
  ScenarioConfig config;
  std::vector<EventRecord> events;
  GroundTruth truth;
  std::vector<ReachRecord> reach_records;
};

SimRun run_scenario(const ScenarioConfig& cfg, const SimOptions& options = {});

}  // namespace reachguard
