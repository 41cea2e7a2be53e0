#include "reachguard/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reachguard {

namespace {

double delta_of(const DeltaTable& deltas, AgentId id) {
  auto it = deltas.find(id);
  if (it == deltas.end()) {
    throw InvalidInput("no synchronisation bound for agent " + std::to_string(id));
  }
  return it->second;
}

}  // namespace

bool is_useful(double t_c_i, double t_rs_i, double t_rs_j, double horizon, double delta_i,
               double delta_j) {
  return t_c_i < t_rs_j + horizon - delta_i - delta_j && t_c_i < t_rs_i + horizon;
}

double useful_until(double t_rs_i, double horizon_i, double t_rs_j, double horizon_j,
                    double delta_i, double delta_j) {
  return std::min(t_rs_j + horizon_j - delta_i - delta_j, t_rs_i + horizon_i);
}

const char* to_string(Collision c) { return c == Collision::no_collision ? "false" : "uncertain"; }

const char* to_string(GlobalSafety g) { return g == GlobalSafety::safe ? "true" : "uncertain"; }

PairCheck check_pairwise(const ReachResult& own, double own_t_c, const ReachMessage& msg,
                         double safe_distance, double delta_i, double delta_j,
                         std::span<const std::size_t> position_axes) {
  if (own.hull.dim() != msg.hull.dim()) {
    throw InvalidInput("check_pairwise: own hull and message hull differ in dimension");
  }
  const double until =
      useful_until(own.t_rs, own.horizon, msg.t_rs, msg.horizon, delta_i, delta_j);
  if (!(own_t_c < until)) {
    throw VerdictWithheld(VerdictWithheld::Reason::stale,
                          "message from agent " + std::to_string(msg.sender) + " is stale");
  }

  PairCheck out;
  out.d_min = min_distance(own.hull, msg.hull, position_axes);
  if (out.d_min > safe_distance) {
    out.verdict = {Collision::no_collision, until};
  } else {
    out.verdict = {Collision::uncertain, std::nullopt};
  }
  return out;
}

Window global_window(double t_c_i, AgentId own_id, double own_t_rs, double own_horizon,
                     std::span<const ReachMessage> msgs, const DeltaTable& deltas) {
  const double delta_i = delta_of(deltas, own_id);
  double end = own_t_rs + own_horizon;
  std::size_t seen = 0;
  for (const auto& [id, delta_j] : deltas) {
    if (id == own_id) continue;
    auto it = std::find_if(msgs.begin(), msgs.end(),
                           [id](const ReachMessage& m) { return m.sender == id; });
    if (it == msgs.end()) {
      throw VerdictWithheld(VerdictWithheld::Reason::incomplete,
                            "no reach set from agent " + std::to_string(id));
    }
    end = std::min(end, it->t_rs + it->horizon - delta_i - delta_j);
    ++seen;
  }
  if (seen != msgs.size()) throw InvalidInput("global_window: message from an unknown agent");
  if (!(t_c_i < end)) {
    throw VerdictWithheld(VerdictWithheld::Reason::expired, "global window already expired");
  }
  return {t_c_i, end};
}

GlobalVerdict check_global(const ReachResult& own, AgentId own_id,
                           std::span<const ReachMessage> msgs, const LinearConstraintSet& unsafe,
                           double t_c_i, const DeltaTable& deltas) {
  const double delta_i = delta_of(deltas, own_id);
  for (const auto& m : msgs) {
    const double delta_j = delta_of(deltas, m.sender);
    if (!(t_c_i < useful_until(own.t_rs, own.horizon, m.t_rs, m.horizon, delta_i, delta_j))) {
      throw VerdictWithheld(VerdictWithheld::Reason::stale,
                            "message from agent " + std::to_string(m.sender) + " is stale");
    }
  }
  const Window w = global_window(t_c_i, own_id, own.t_rs, own.horizon, msgs, deltas);

  // deltas is ordered by id, which fixes the block order of the joint state.
  std::vector<HyperRectangle> blocks;
  blocks.reserve(deltas.size());
  for (const auto& entry : deltas) {
    if (entry.first == own_id) {
      blocks.push_back(own.hull);
      continue;
    }
    for (const auto& m : msgs) {
      if (m.sender == entry.first) blocks.push_back(m.hull);
    }
  }
  const HyperRectangle joint = concat(blocks);
  if (joint.dim() != unsafe.dim()) {
    throw InvalidInput("check_global: unsafe set has " + std::to_string(unsafe.dim()) +
                       " columns, joint state has " + std::to_string(joint.dim()));
  }
  if (possibly_intersects(joint, unsafe)) return {GlobalSafety::uncertain, std::nullopt};
  return {GlobalSafety::safe, w.end};
}

void TimingProfile::validate() const {
  for (double v : {tau_e, tau_d, tau_tf, tau_c, tau_control, t_runtime}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput("timing profile entries must be finite and non-negative");
    }
  }
}

double vt_estimate(const TimingProfile& p, int n_agents) {
  if (n_agents < 2) throw InvalidInput("vt_estimate needs at least two agents");
  p.validate();
  return p.t_runtime + p.tau_e + (n_agents - 1) * (p.tau_tf + p.tau_d + p.tau_c);
}

CapacityBounds agent_capacity_bounds(const TimingProfile& worst, const TimingProfile& best,
                                     double control_period_ms, double t_runtime_ms) {
  worst.validate();
  best.validate();
  auto bound = [&](const TimingProfile& p, const char* which) {
    const double den = p.tau_tf + p.tau_d + p.tau_c;
    if (!(den > 0.0)) {
      throw InvalidInput(std::string(which) + " profile has zero communication cost");
    }
    const double num = control_period_ms - p.tau_control - t_runtime_ms - p.tau_e;
    if (!(num > 0.0)) {
      throw CapacityZero(std::string(which) +
                         " profile leaves no time in the control period for messages");
    }
    return num / den + 1.0;
  };
  return {bound(worst, "worst-case"), bound(best, "best-case")};
}

}  // namespace reachguard
