#pragma once

// Per-agent timing averages and verdict counts recomputed from an event log.
// Timing averages are milliseconds; an absent value means no sample.

#include <optional>
#include <span>
#include <vector>

#include "reachguard/sim.hpp"

namespace reachguard {

struct AgentMetrics {
  AgentId id = 0;
  std::optional<double> tau_rs;  // reach_done - reach_start
  std::optional<double> tau_e;   // send - reach_done
  std::optional<double> tau_tf;  // deliver - send, messages received
  std::optional<double> tau_d;   // decode - deliver
  std::optional<double> tau_c;   // check - decode
  std::optional<double> vt;      // vt_estimate over the averages, N >= 2
  std::size_t reaches = 0;
  std::size_t sent = 0;
  std::size_t delivered = 0;
  std::size_t useful = 0;
  std::size_t stale = 0;
  std::size_t malformed = 0;
  std::size_t pair_false = 0;
  std::size_t pair_uncertain = 0;
  std::size_t global_true = 0;
  std::size_t global_uncertain = 0;
  std::size_t local_unsafe = 0;
  std::size_t budget_overruns = 0;
  std::size_t waypoints = 0;
};

struct Metrics {
  std::size_t n_agents = 0;
  std::vector<AgentMetrics> agents;  // ascending id
  std::optional<double> min_distance;  // ground truth, when known
  bool no_messages = true;             // no message was delivered

  std::size_t total(std::size_t AgentMetrics::*field) const;
  // Any uncertain pairwise or global verdict or any local-unsafe flag.
  bool any_uncertain() const;
};

// Agents are those with a reach_start event. min_distance is copied through.
Metrics metrics_report(std::span<const EventRecord> events, std::optional<double> min_distance = {});

// Convenience over a finished run: min distance from the truth scan.
Metrics metrics_report(const SimRun& run);

}  // namespace reachguard
