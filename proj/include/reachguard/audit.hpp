#pragma once

#include <span>
#include <vector>

#include "reachguard/kernels.hpp"
#include "reachguard/sim.hpp"

namespace reachguard {

struct AuditReport {
  ContainmentStats containment;         // (a) truth inside own reach boxes
  std::size_t distance_claims = 0;      // (b) collision=false verdicts checked
  std::size_t distance_violations = 0;
  std::size_t region_claims = 0;        // (c) global_safe=true verdicts checked
  std::size_t region_violations = 0;

  std::size_t violations() const {
    return containment.violations + distance_violations + region_violations;
  }
  bool clean() const { return violations() == 0; }
};

// Claims are read from the event log and mapped to global time through the
// checking agent's clock offset. `records` may be empty to skip (a).
AuditReport soundness_audit(std::span<const EventRecord> events, const GroundTruth& truth,
                            std::span<const ReachRecord> records, const ScenarioConfig& cfg);

AuditReport soundness_audit(const SimRun& run);

std::vector<DistanceClaim> distance_claims(std::span<const EventRecord> events,
                                           const GroundTruth& truth, double safe_distance);
std::vector<RegionClaim> region_claims(std::span<const EventRecord> events,
                                       const GroundTruth& truth);

}  // namespace reachguard
