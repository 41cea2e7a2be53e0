#include "reachguard/metrics.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "reachguard/verify.hpp"

namespace reachguard {

namespace {

struct Mean {
  double sum = 0.0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> get() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

struct Acc {
  Mean rs, e, tf, d, c;
};

constexpr double kMs = 1000.0;

}  // namespace

std::size_t Metrics::total(std::size_t AgentMetrics::*field) const {
  std::size_t s = 0;
  for (const auto& a : agents) s += a.*field;
  return s;
}

bool Metrics::any_uncertain() const {
  return total(&AgentMetrics::pair_uncertain) + total(&AgentMetrics::global_uncertain) +
             total(&AgentMetrics::local_unsafe) >
         0;
}

Metrics metrics_report(std::span<const EventRecord> events, std::optional<double> min_distance) {
  std::map<AgentId, AgentMetrics> per;
  std::map<AgentId, Acc> acc;
  std::map<std::pair<AgentId, int>, double> reach_start, reach_done;
  std::map<std::uint64_t, double> send_time;
  std::map<std::pair<AgentId, std::uint64_t>, double> deliver_time, decode_time;

  for (const auto& ev : events) {
    if (ev.kind == EventKind::reach_start) {
      per[ev.agent].id = ev.agent;
      acc[ev.agent];
    }
  }
  auto agent = [&](AgentId id) -> AgentMetrics& {
    auto& m = per[id];
    m.id = id;
    return m;
  };

  for (const auto& ev : events) {
    const auto& p = ev.payload;
    AgentMetrics& m = agent(ev.agent);
    Acc& a = acc[ev.agent];
    switch (ev.kind) {
      case EventKind::reach_start:
        reach_start[{ev.agent, p.at("reach_id").get<int>()}] = ev.time;
        break;
      case EventKind::reach_done: {
        const int rid = p.at("reach_id").get<int>();
        reach_done[{ev.agent, rid}] = ev.time;
        if (auto it = reach_start.find({ev.agent, rid}); it != reach_start.end()) {
          a.rs.add((ev.time - it->second) * kMs);
        }
        ++m.reaches;
        break;
      }
      case EventKind::send: {
        const int rid = p.at("reach_id").get<int>();
        send_time[p.at("msg_id").get<std::uint64_t>()] = ev.time;
        if (auto it = reach_done.find({ev.agent, rid}); it != reach_done.end()) {
          a.e.add((ev.time - it->second) * kMs);
        }
        ++m.sent;
        break;
      }
      case EventKind::deliver: {
        const auto id = p.at("msg_id").get<std::uint64_t>();
        deliver_time[{ev.agent, id}] = ev.time;
        if (auto it = send_time.find(id); it != send_time.end()) a.tf.add((ev.time - it->second) * kMs);
        ++m.delivered;
        break;
      }
      case EventKind::decode: {
        const auto id = p.at("msg_id").get<std::uint64_t>();
        decode_time[{ev.agent, id}] = ev.time;
        if (auto it = deliver_time.find({ev.agent, id}); it != deliver_time.end()) {
          a.d.add((ev.time - it->second) * kMs);
        }
        break;
      }
      case EventKind::pair_check:
      case EventKind::stale_msg: {
        const auto id = p.at("msg_id").get<std::uint64_t>();
        if (auto it = decode_time.find({ev.agent, id}); it != decode_time.end()) {
          a.c.add((ev.time - it->second) * kMs);
        }
        if (ev.kind == EventKind::stale_msg) {
          ++m.stale;
        } else {
          ++m.useful;
          if (p.at("collision").get<std::string>() == "false") {
            ++m.pair_false;
          } else {
            ++m.pair_uncertain;
          }
        }
        break;
      }
      case EventKind::global_check:
        if (p.value("status", "") == "ok") {
          if (p.at("global_safe").get<std::string>() == "true") {
            ++m.global_true;
          } else {
            ++m.global_uncertain;
          }
        }
        break;
      case EventKind::malformed_msg:
        ++m.malformed;
        break;
      case EventKind::local_unsafe:
        ++m.local_unsafe;
        break;
      case EventKind::budget_overrun:
        ++m.budget_overruns;
        break;
      case EventKind::waypoint_reached:
        ++m.waypoints;
        break;
    }
  }

  Metrics out;
  out.min_distance = min_distance;
  out.n_agents = per.size();
  for (auto& [id, m] : per) {
    const Acc& a = acc[id];
    m.tau_rs = a.rs.get();
    m.tau_e = a.e.get();
    m.tau_tf = a.tf.get();
    m.tau_d = a.d.get();
    m.tau_c = a.c.get();
    if (m.delivered > 0) out.no_messages = false;
    if (out.n_agents >= 2 && m.tau_rs && m.tau_e && m.tau_tf && m.tau_d && m.tau_c) {
      TimingProfile p{*m.tau_e, *m.tau_d, *m.tau_tf, *m.tau_c, 0.0, *m.tau_rs};
      m.vt = vt_estimate(p, static_cast<int>(out.n_agents));
    }
    out.agents.push_back(m);
  }
  return out;
}

Metrics metrics_report(const SimRun& run) {
  std::optional<double> d;
  if (run.truth.ids.size() >= 2) {
    d = kernels::parallel::min_pairwise_distance(run.truth, run.config.position_axes);
  }
  return metrics_report(run.events, d);
}

}  // namespace reachguard
