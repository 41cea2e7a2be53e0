#include "reachguard/audit.hpp"

namespace reachguard {

std::vector<DistanceClaim> distance_claims(std::span<const EventRecord> events,
                                           const GroundTruth& truth, double safe_distance) {
  std::vector<DistanceClaim> out;
  for (const auto& ev : events) {
    if (ev.kind != EventKind::pair_check) continue;
    const auto& p = ev.payload;
    if (p.at("collision").get<std::string>() != "false") continue;
    const double off = truth.clock_offsets[truth.index_of(ev.agent)];
    out.push_back({ev.agent, p.at("sender").get<AgentId>(), p.at("t_c").get<double>() - off,
                   p.at("t_safe").get<double>() - off, safe_distance});
  }
  return out;
}

std::vector<RegionClaim> region_claims(std::span<const EventRecord> events,
                                       const GroundTruth& truth) {
  std::vector<RegionClaim> out;
  for (const auto& ev : events) {
    if (ev.kind != EventKind::global_check) continue;
    const auto& p = ev.payload;
    if (p.value("status", "") != "ok" || p.at("global_safe").get<std::string>() != "true") continue;
    const double off = truth.clock_offsets[truth.index_of(ev.agent)];
    out.push_back({p.at("t_c").get<double>() - off, p.at("t_global_safe").get<double>() - off});
  }
  return out;
}

AuditReport soundness_audit(std::span<const EventRecord> events, const GroundTruth& truth,
                            std::span<const ReachRecord> records, const ScenarioConfig& cfg) {
  AuditReport r;
  r.containment = kernels::parallel::reach_containment(truth, records);

  const auto dc = distance_claims(events, truth, cfg.safe_distance);
  r.distance_claims = dc.size();
  r.distance_violations = kernels::parallel::distance_violations(truth, dc, cfg.position_axes);

  if (cfg.global_unsafe) {
    const auto rc = region_claims(events, truth);
    r.region_claims = rc.size();
    r.region_violations = kernels::parallel::region_violations(truth, rc, *cfg.global_unsafe);
  }
  return r;
}

AuditReport soundness_audit(const SimRun& run) {
  return soundness_audit(run.events, run.truth, run.reach_records, run.config);
}

}  // namespace reachguard
