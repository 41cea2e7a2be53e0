#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "reachguard/comm.hpp"

namespace reachguard {

// Dense ground-truth samples: sample k of every agent is the true state at
// global time k * dt. Agents are stored in ascending id order.
struct GroundTruth {
  double dt = 1e-3;
  std::size_t samples = 0;
  std::vector<AgentId> ids;
  std::vector<std::size_t> dims;
  std::vector<double> clock_offsets;
  std::vector<std::vector<double>> states;  // per agent, samples * dim values

  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  std::span<const double> state(std::size_t agent_index, std::size_t k) const {
    const std::size_t n = dims[agent_index];
    return std::span<const double>(states[agent_index]).subspan(k * n, n);
  }
  // Index of the agent with the given id; throws InvalidInput if absent.
  std::size_t index_of(AgentId id) const;
  // Half-open index range of the samples whose time lies in [t0, t1].
  std::pair<std::size_t, std::size_t> sample_range(double t0, double t1) const;
};

}  // namespace reachguard
