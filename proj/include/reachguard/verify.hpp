#pragma once

// Usefulness of received reach sets, pairwise collision checking, global
// property checking over the joint state, and the timing/capacity formulas.
//
// Times passed to these functions are seconds on the checking agent's local
// clock unless stated otherwise; TimingProfile values are milliseconds.

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "reachguard/comm.hpp"
#include "reachguard/geometry.hpp"
#include "reachguard/reach.hpp"

namespace reachguard {

// t_c < t_rs_j + T - delta_i - delta_j  and  t_c < t_rs_i + T, both strict.
bool is_useful(double t_c_i, double t_rs_i, double t_rs_j, double horizon, double delta_i,
               double delta_j);

// Local time up to which both sets cover the pair, allowing separate horizons:
// min(t_rs_j + T_j - delta_i - delta_j, t_rs_i + T_i).
double useful_until(double t_rs_i, double horizon_i, double t_rs_j, double horizon_j,
                    double delta_i, double delta_j);

enum class Collision { no_collision, uncertain };

const char* to_string(Collision c);

struct PairVerdict {
  Collision collision = Collision::uncertain;
  std::optional<double> t_safe;  // present iff no_collision
};

struct PairCheck {
  PairVerdict verdict;
  double d_min = 0.0;
};

// Throws VerdictWithheld(stale) when the message is no longer useful at t_c.
PairCheck check_pairwise(const ReachResult& own, double own_t_c, const ReachMessage& msg,
                         double safe_distance, double delta_i, double delta_j,
                         std::span<const std::size_t> position_axes);

struct Window {
  double start = 0.0;
  double end = 0.0;
};

// Per-agent synchronisation bounds of every agent in the system.
using DeltaTable = std::map<AgentId, double>;

// start = t_c; end = min(own_t_rs + T_own, min_j(t_rs_j + T_j - delta_i - delta_j)).
// `msgs` must hold exactly one message for every agent in `deltas` other than
// `own_id`. Throws VerdictWithheld(incomplete) if a peer is missing and
// VerdictWithheld(expired) if start >= end.
Window global_window(double t_c_i, AgentId own_id, double own_t_rs, double own_horizon,
                     std::span<const ReachMessage> msgs, const DeltaTable& deltas);

enum class GlobalSafety { safe, uncertain };

const char* to_string(GlobalSafety g);

struct GlobalVerdict {
  GlobalSafety global_safe = GlobalSafety::uncertain;
  std::optional<double> t_global_safe;  // present iff safe
};

// Joint box is the concatenation of hulls in ascending agent id. Throws
// VerdictWithheld(stale) if some message stopped being useful, otherwise
// propagates the window errors.
GlobalVerdict check_global(const ReachResult& own, AgentId own_id,
                           std::span<const ReachMessage> msgs, const LinearConstraintSet& unsafe,
                           double t_c_i, const DeltaTable& deltas);

struct TimingProfile {
  double tau_e = 0.0;
  double tau_d = 0.0;
  double tau_tf = 0.0;
  double tau_c = 0.0;
  double tau_control = 0.0;
  double t_runtime = 0.0;

  void validate() const;
};

// t_runtime + tau_e + (n - 1)(tau_tf + tau_d + tau_c), milliseconds.
double vt_estimate(const TimingProfile& p, int n_agents);

struct CapacityBounds {
  double n_min = 0.0;
  double n_max = 0.0;
};

// n = (T_c - tau_control - t_runtime - tau_e) / (tau_tf + tau_d + tau_c) + 1,
// with worst-case costs giving n_min and best-case costs n_max. Throws
// InvalidInput on a non-positive denominator and CapacityZero on a
// non-positive numerator.
CapacityBounds agent_capacity_bounds(const TimingProfile& worst, const TimingProfile& best,
                                     double control_period_ms, double t_runtime_ms);

}  // namespace reachguard
