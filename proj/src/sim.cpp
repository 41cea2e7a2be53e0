#include "reachguard/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <random>

namespace reachguard {

namespace {

using nlohmann::json;

constexpr const char* kKindNames[] = {
    "reach_start", "reach_done",       "send",         "deliver",
    "decode",      "pair_check",       "global_check", "waypoint_reached",
    "local_unsafe", "budget_overrun",  "stale_msg",    "malformed_msg",
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

// Uniform in [-1, 1) from 53 generator bits.
double symmetric_unit(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

json hull_json(const HyperRectangle& h) {
  json out = json::array();
  for (const auto& iv : h.intervals()) out.push_back({iv.lo, iv.hi});
  return out;
}

struct Agent {
  const AgentConfig* cfg = nullptr;
  ModelSpec model;
  ClockModel clock;
  TimingProfile profile;
  std::unique_ptr<Rk4> rk;

  std::vector<double> x;  // true state at t_truth
  double t_truth = 0.0;
  std::size_t next_sample = 0;
  std::vector<double> samples;
  std::vector<double> u;

  std::mt19937_64 noise;
  PidMemory memory;
  std::size_t waypoint = 0;
  bool mission_done = false;
  int tick = 0;

  std::optional<ReachResult> current;
  std::map<AgentId, ReachMessage> latest;
};

class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, const SimOptions& opt) : cfg_(cfg), opt_(opt) {
    cfg_.validate();
    run_.config = cfg_;
    total_samples_ =
        static_cast<std::size_t>(std::floor(cfg_.duration / cfg_.truth_dt + 1e-9)) + 1;

    std::mt19937_64 setup(stream_seed(cfg_.seed, 0));
    for (const auto& ac : cfg_.agents) {
      Agent a;
      a.cfg = &ac;
      a.model = model_by_name(ac.model);
      const double offset = ac.clock_offset ? *ac.clock_offset : ac.delta * symmetric_unit(setup);
      a.clock = ClockModel(ac.id, std::clamp(offset, -ac.delta, ac.delta), ac.delta);
      a.profile = cfg_.profile_of(ac);
      a.x = ac.initial_state;
      for (std::size_t k = 0; k < ac.initial_jitter.size(); ++k) {
        a.x[k] += ac.initial_jitter[k] * symmetric_unit(setup);
      }
      a.u.assign(a.model.input_dim, 0.0);
      a.noise.seed(stream_seed(cfg_.seed, 1000 + ac.id));
      a.samples.reserve(total_samples_ * a.model.state_dim);
      agents_.push_back(std::move(a));
    }
    // Rk4 keeps a pointer to the model, so bind after the vector is final.
    for (auto& a : agents_) a.rk = std::make_unique<Rk4>(a.model);

    ChannelParams cp{cfg_.channel.min_delay, cfg_.channel.max_delay, cfg_.channel.drop_prob,
                     cfg_.channel.corrupt_prob, stream_seed(cfg_.seed, 1), {}};
    if (cfg_.channel.delay_source == DelaySource::profile) {
      cp.fixed_delay.resize(cfg_.agents.back().id + 1);
      for (const auto& a : agents_) cp.fixed_delay[a.cfg->id] = a.profile.tau_tf / 1000.0;
    }
    channel_.emplace(std::move(cp));
    for (const auto& a : agents_) deltas_[a.cfg->id] = a.cfg->delta;
  }

  SimRun run() {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      schedule(0.0, [this, i] { on_tick(i); });
    }
    while (!queue_.empty()) {
      Pending ev = queue_.top();
      if (ev.time > cfg_.duration) break;
      queue_.pop();
      now_ = ev.time;
      ev.action();
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) advance_truth(i, cfg_.duration);

    GroundTruth& t = run_.truth;
    t.dt = cfg_.truth_dt;
    t.samples = total_samples_;
    for (auto& a : agents_) {
      t.ids.push_back(a.cfg->id);
      t.dims.push_back(a.model.state_dim);
      t.clock_offsets.push_back(a.clock.offset);
      t.states.push_back(std::move(a.samples));
    }
    return std::move(run_);
  }

 private:
  struct Pending {
    double time;
    std::uint64_t seq;
    std::function<void()> action;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  void schedule(double t, std::function<void()> action) {
    queue_.push({t, next_seq_++, std::move(action)});
  }

  void log(std::size_t i, EventKind kind, json payload) {
    run_.events.push_back({now_, agents_[i].cfg->id, kind, std::move(payload)});
  }

  double local_now(std::size_t i) const { return agents_[i].clock.local_time(now_); }

  std::size_t index_of(AgentId id) const {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (agents_[i].cfg->id == id) return i;
    }
    return agents_.size();
  }

  // Integrates agent i's true state up to global t, storing grid samples.
  void advance_truth(std::size_t i, double t) {
    Agent& a = agents_[i];
    while (a.next_sample < total_samples_) {
      const double ts = static_cast<double>(a.next_sample) * cfg_.truth_dt;
      if (ts > t) break;
      a.rk->advance(a.x, a.u, ts - a.t_truth, cfg_.truth_dt);
      a.t_truth = ts;
      a.samples.insert(a.samples.end(), a.x.begin(), a.x.end());
      ++a.next_sample;
    }
    if (t > a.t_truth) {
      a.rk->advance(a.x, a.u, t - a.t_truth, cfg_.truth_dt);
      a.t_truth = t;
    }
  }

  // Measurement noise and the matching reach bloat. Each noise component is
  // bounded by noise_fraction times the bloat rule applied to the true state.
  // The agent applies the rule to its measurement, with the position terms
  // using the largest speed consistent with the measured velocity interval,
  // so the bloated box always contains the true state.
  std::pair<std::vector<double>, std::vector<double>> measure(Agent& a) {
    const AgentConfig& c = *a.cfg;
    const std::size_t n = a.model.state_dim;
    const bool quad = a.model.name == "quadcopter4d";
    auto bloat_for = [&](std::span<const double> s, bool widen) {
      std::vector<double> b(n, 0.0);
      for (std::size_t k = 0; k < n && k < c.sensor.bloat.size(); ++k) b[k] = c.sensor.bloat[k];
      if (quad) {
        const double e = c.sensor.gps_error;
        b[1] += e * std::abs(s[1]);
        b[3] += e * std::abs(s[3]);
        b[0] += e * (std::abs(s[1]) + (widen ? b[1] : 0.0)) * c.control_period;
        b[2] += e * (std::abs(s[3]) + (widen ? b[3] : 0.0)) * c.control_period;
      }
      return b;
    };
    const auto true_bloat = bloat_for(a.x, false);
    std::vector<double> meas(a.x);
    for (std::size_t k = 0; k < n; ++k) {
      meas[k] += c.sensor.noise_fraction * true_bloat[k] * symmetric_unit(a.noise);
    }
    auto b = bloat_for(meas, true);
    return {std::move(meas), std::move(b)};
  }

  InputSet reach_input(const Agent& a) const {
    if (a.model.input_dim == 0) return {};
    if (a.cfg->reach_input == ReachInput::held) return point_input(a.u);
    const double c = a.cfg->gains.output_clamp;
    return InputSet(a.model.input_dim, Interval(-c, c));
  }

  void on_tick(std::size_t i) {
    Agent& a = agents_[i];
    const AgentConfig& c = *a.cfg;
    advance_truth(i, now_);
    const double t_local = local_now(i);
    const int reach_id = a.tick;

    auto [meas, bloat_vec] = measure(a);
    if (a.model.name == "quadcopter4d") {
      if (!c.waypoints.empty()) {
        while (!a.mission_done) {
          const Waypoint& w = c.waypoints[a.waypoint];
          if (std::hypot(meas[0] - w.x, meas[2] - w.y) >= c.waypoint_tolerance) break;
          log(i, EventKind::waypoint_reached,
              {{"index", a.waypoint}, {"x", w.x}, {"y", w.y}, {"t_local", t_local}});
          if (++a.waypoint == c.waypoints.size()) {
            a.mission_done = true;
            a.waypoint = c.waypoints.size() - 1;
          }
        }
        const PidOutput out =
            pid_step(QuadState::from(meas), c.waypoints[a.waypoint], c.gains, c.control_period, a.memory);
        a.memory = out.memory;
        a.u = {out.u.theta, out.u.phi};
      }
    }

    log(i, EventKind::reach_start, {{"reach_id", reach_id}, {"t_rs", t_local}});
    const HyperRectangle initial = bloat(HyperRectangle::point(meas), bloat_vec);
    auto result = std::make_shared<ReachResult>(reach_anytime(initial, reach_input(a), t_local, c.horizon,
                                                              c.h0, c.budget, c.local_unsafe, a.model));
    if (opt_.keep_reach_records) run_.reach_records.push_back({c.id, now_, *result});

    schedule(now_ + a.profile.t_runtime / 1000.0, [this, i, reach_id, result] {
      on_reach_done(i, reach_id, result);
    });
    ++a.tick;
    const double next = a.clock.global_time(a.tick * c.control_period);
    schedule(std::max(next, now_), [this, i] { on_tick(i); });
  }

  void on_reach_done(std::size_t i, int reach_id, const std::shared_ptr<ReachResult>& r) {
    Agent& a = agents_[i];
    a.current = *r;
    log(i, EventKind::reach_done,
        {{"reach_id", reach_id},
         {"t_rs", r->t_rs},
         {"horizon", r->horizon},
         {"passes", r->passes_completed},
         {"final_step", r->final_step},
         {"local_safe", to_string(r->local_safe)},
         {"hull", hull_json(r->hull)}});
    if (r->local_safe == Safety::uncertain) {
      log(i, EventKind::local_unsafe, {{"reach_id", reach_id}, {"t_rs", r->t_rs}});
    }
    if (r->budget_overrun) {
      log(i, EventKind::budget_overrun, {{"reach_id", reach_id}, {"elapsed_ms", r->elapsed_ms}});
    }
    if (agents_.size() < 2) return;
    schedule(now_ + a.profile.tau_e / 1000.0, [this, i, reach_id, r] { on_send(i, reach_id, *r); });
  }

  void on_send(std::size_t i, int reach_id, const ReachResult& r) {
    Agent& a = agents_[i];
    ReachMessage msg{a.cfg->id, r.t_rs, r.horizon, r.hull, local_now(i)};
    std::vector<AgentId> recipients;
    for (const auto& b : agents_) {
      if (b.cfg->id != a.cfg->id) recipients.push_back(b.cfg->id);
    }
    const std::uint64_t msg_id = next_msg_id_++;
    const auto times = channel_->send(msg, msg_id, recipients, now_);
    std::size_t dropped = 0;
    for (std::size_t k = 0; k < recipients.size(); ++k) {
      if (!times[k]) {
        ++dropped;
        continue;
      }
      const std::size_t j = index_of(recipients[k]);
      schedule(*times[k], [this, j] { on_deliver(j); });
    }
    log(i, EventKind::send,
        {{"reach_id", reach_id},
         {"msg_id", msg_id},
         {"t_send", msg.t_send},
         {"t_rs", msg.t_rs},
         {"bytes", kHeaderBytes + kIntervalBytes * msg.hull.dim()},
         {"recipients", recipients.size()},
         {"dropped", dropped}});
  }

  void on_deliver(std::size_t j) {
    Agent& b = agents_[j];
    for (auto& d : channel_->poll(b.cfg->id, now_)) {
      log(j, EventKind::deliver,
          {{"msg_id", d.msg_id}, {"sender", d.sender}, {"send_time", d.send_time}});
      auto bytes = std::make_shared<std::vector<std::uint8_t>>(std::move(d.bytes));
      const std::uint64_t msg_id = d.msg_id;
      const AgentId sender = d.sender;
      schedule(now_ + b.profile.tau_d / 1000.0,
               [this, j, msg_id, sender, bytes] { on_decode(j, msg_id, sender, *bytes); });
    }
  }

  void on_decode(std::size_t j, std::uint64_t msg_id, AgentId sender,
                 const std::vector<std::uint8_t>& bytes) {
    ReachMessage msg;
    try {
      msg = decode(bytes);
      const std::size_t s = index_of(msg.sender);
      if (s == agents_.size() || msg.sender == agents_[j].cfg->id) {
        throw MalformedMessage("unknown sender " + std::to_string(msg.sender));
      }
      if (msg.hull.dim() != agents_[s].model.state_dim) {
        throw MalformedMessage("hull dimension does not match the sender's model");
      }
    } catch (const MalformedMessage& e) {
      log(j, EventKind::malformed_msg, {{"msg_id", msg_id}, {"sender", sender}, {"error", e.what()}});
      return;
    }
    log(j, EventKind::decode, {{"msg_id", msg_id}, {"sender", msg.sender}});
    schedule(now_ + agents_[j].profile.tau_c / 1000.0,
             [this, j, msg_id, msg = std::move(msg)] { on_check(j, msg_id, msg); });
  }

  void on_check(std::size_t j, std::uint64_t msg_id, const ReachMessage& msg) {
    Agent& b = agents_[j];
    const double t_c = local_now(j);
    if (!b.current) {
      log(j, EventKind::stale_msg,
          {{"msg_id", msg_id}, {"sender", msg.sender}, {"t_c", t_c}, {"reason", "no_own_reach"}});
      return;
    }
    const double delta_j = deltas_.at(msg.sender);
    try {
      const PairCheck pc = check_pairwise(*b.current, t_c, msg, cfg_.safe_distance, b.cfg->delta,
                                          delta_j, cfg_.position_axes);
      json p{{"msg_id", msg_id},
             {"sender", msg.sender},
             {"t_c", t_c},
             {"t_rs_own", b.current->t_rs},
             {"t_rs_peer", msg.t_rs},
             {"d_min", pc.d_min},
             {"collision", to_string(pc.verdict.collision)},
             {"t_safe", nullptr}};
      if (pc.verdict.t_safe) p["t_safe"] = *pc.verdict.t_safe;
      log(j, EventKind::pair_check, std::move(p));
    } catch (const VerdictWithheld&) {
      log(j, EventKind::stale_msg,
          {{"msg_id", msg_id},
           {"sender", msg.sender},
           {"t_c", t_c},
           {"t_rs_peer", msg.t_rs},
           {"reason", "not_useful"}});
      return;
    }

    auto it = b.latest.find(msg.sender);
    if (it == b.latest.end() || it->second.t_rs <= msg.t_rs) b.latest.insert_or_assign(msg.sender, msg);
    if (cfg_.global_unsafe) global_check(j, msg_id, t_c);
  }

  void global_check(std::size_t j, std::uint64_t msg_id, double t_c) {
    Agent& b = agents_[j];
    std::vector<ReachMessage> msgs;
    for (const auto& [id, m] : b.latest) msgs.push_back(m);
    json p{{"msg_id", msg_id}, {"t_c", t_c}, {"global_safe", nullptr}, {"t_global_safe", nullptr}};
    try {
      const GlobalVerdict v =
          check_global(*b.current, b.cfg->id, msgs, *cfg_.global_unsafe, t_c, deltas_);
      p["status"] = "ok";
      p["global_safe"] = to_string(v.global_safe);
      if (v.t_global_safe) p["t_global_safe"] = *v.t_global_safe;
    } catch (const VerdictWithheld& e) {
      switch (e.reason()) {
        case VerdictWithheld::Reason::stale: p["status"] = "stale"; break;
        case VerdictWithheld::Reason::incomplete: p["status"] = "incomplete"; break;
        case VerdictWithheld::Reason::expired: p["status"] = "expired"; break;
      }
    }
    log(j, EventKind::global_check, std::move(p));
  }

  ScenarioConfig cfg_;
  SimOptions opt_;
  SimRun run_;
  std::size_t total_samples_ = 0;
  std::vector<Agent> agents_;
  DeltaTable deltas_;
  std::optional<ChannelModel> channel_;
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_msg_id_ = 0;
  double now_ = 0.0;
};

}  // namespace

const char* to_string(EventKind k) { return kKindNames[static_cast<int>(k)]; }

EventKind event_kind_from(std::string_view name) {
  for (int k = 0; k < static_cast<int>(std::size(kKindNames)); ++k) {
    if (name == kKindNames[k]) return static_cast<EventKind>(k);
  }
  throw InvalidInput("unknown event kind '" + std::string(name) + "'");
}

SimRun run_scenario(const ScenarioConfig& cfg, const SimOptions& options) {
  return Simulation(cfg, options).run();
}

}  // namespace reachguard
