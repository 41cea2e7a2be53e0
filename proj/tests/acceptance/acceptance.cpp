// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances are fixed constants below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "reachguard/audit.hpp"
#include "reachguard/comm.hpp"
#include "reachguard/io.hpp"
#include "reachguard/kernels.hpp"
#include "reachguard/metrics.hpp"
#include "reachguard/reach.hpp"
#include "reachguard/sim.hpp"
#include "reachguard/verify.hpp"
#include "support.hpp"

using namespace reachguard;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Table values for the eight quadcopters (milliseconds).
struct TableColumn {
  double tau_e, tau_d, tau_tf, tau_c, vt;
};
constexpr TableColumn kTable[8] = {
    {0.058, 0.0169, 2.64, 0.04, 28.9363},  {0.055, 0.0193, 2.48, 0.05, 27.9},
    {0.0553, 0.0197, 1.42, 0.07, 20.6232}, {0.0525, 0.019, 1.11, 0.05, 18.3055},
    {0.0557, 0.0210, 1.12, 0.03, 18.2527}, {0.0583, 0.0181, 1.08, 0.07, 18.235},
    {0.0584, 0.0177, 1.05, 0.07, 18.0223}, {0.0597, 0.022, 1.13, 0.14, 19.1037},
};

Outcome reach_soundness() {
  const auto t0 = Clock::now();
  support::Rng rng(1001);
  struct Case {
    ModelSpec model;
    HyperRectangle init;
    std::vector<double> u;
  };
  const std::vector<Case> cases{
      {quadcopter4d_model(), HyperRectangle{{-5, 5}, {8, 12}, {-5, 5}, {-2, 2}}, {0.2, -0.15}},
      {quadcopter4d_model(), HyperRectangle{{100, 101}, {-30, -29}, {40, 45}, {0, 1}}, {-0.35, 0.35}},
      {harmonic2d_model(), HyperRectangle{{0.95, 1.05}, {-0.05, 0.05}}, {}},
      {constant1d_model(), HyperRectangle{{0, 0.1}}, {}},
  };
  std::size_t checked = 0, violations = 0;
  for (const auto& c : cases) {
    const ReachResult r = reach_anytime(c.init, point_input(c.u), 0.0, 2.0, 0.1,
                                        RuntimeBudget::passes(3), {}, c.model);
    std::vector<double> pts;
    for (int i = 0; i < 1000; ++i) {
      const auto p = rng.point_in(c.init);
      pts.insert(pts.end(), p.begin(), p.end());
    }
    const auto st = kernels::parallel::ensemble_containment(r, c.model, pts, c.u, 1e-4);
    checked += st.checked;
    violations += st.violations;
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 120.0,
          fmt::format("{} cases x 1000 points, {} samples, {} violations, {:.1f} s", cases.size(),
                      checked, violations, secs)};
}

Outcome anytime_refinement() {
  support::Rng rng(1002);
  const ModelSpec quad = quadcopter4d_model();
  std::size_t comparisons = 0, violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const HyperRectangle init = rng.box(4, -10, 10);
    const std::array<Interval, 2> u{rng.interval(-0.35, 0.35), rng.interval(-0.35, 0.35)};
    const ReachResult r = reach_anytime(init, u, 0.0, 2.0, rng.uniform(0.05, 0.4),
                                        RuntimeBudget::passes(5), {}, quad);
    for (std::size_t p = 1; p < r.pass_hulls.size(); ++p) {
      for (std::size_t k = 0; k < 4; ++k) {
        ++comparisons;
        if (r.pass_hulls[p][k].width() > r.pass_hulls[p - 1][k].width() + 1e-9) ++violations;
      }
    }
  }
  return {violations == 0 && comparisons == 100 * 4 * 4,
          fmt::format("100 cases, {} width comparisons, {} violations", comparisons, violations)};
}

Outcome vt_table() {
  const SimRun run = run_scenario(support::load("table1"), {.keep_reach_records = false});
  const Metrics m = metrics_report(run.events);
  if (m.agents.size() != 8) return {false, "expected 8 agents"};
  bool ok = true;
  double worst = 0.0;
  std::string first;
  for (std::size_t i = 0; i < 8; ++i) {
    if (!m.agents[i].vt) return {false, fmt::format("agent {} has no VT", m.agents[i].id)};
    const double err = std::abs(*m.agents[i].vt - kTable[i].vt);
    worst = std::max(worst, err);
    ok = ok && err <= 1e-3;
    if (i == 0) {
      ok = ok && err <= 1e-4;
      first = fmt::format("{:.4f}", *m.agents[i].vt);
    }
  }
  // The formula itself on the table columns, independently of the simulator.
  for (std::size_t i = 0; i < 8; ++i) {
    const auto& c = kTable[i];
    const double direct = vt_estimate({c.tau_e, c.tau_d, c.tau_tf, c.tau_c, 0.0, 10.0}, 8);
    ok = ok && std::abs(direct - c.vt) <= 1e-3;
  }
  return {ok, fmt::format("agent 1 VT {}, worst deviation {:.2g} ms over 8 agents", first, worst)};
}

Outcome capacity() {
  const auto j = support::load_json("capacity_paper");
  const auto b = agent_capacity_bounds(parse_timing_profile(j["worst"]), parse_timing_profile(j["best"]),
                                       j["T_c"].get<double>(), j["t_runtime"].get<double>());
  const bool ok = std::abs(b.n_min - 64.0) <= 2.0 && std::abs(b.n_max - 168.0) <= 2.0;
  return {ok, fmt::format("n_min {:.4f}, n_max {:.4f} (reference 64 and 168)", b.n_min, b.n_max)};
}

Outcome nominal_mission() {
  const auto t0 = Clock::now();
  const ScenarioConfig cfg = support::load("nominal8");
  const SimRun run = run_scenario(cfg);
  const double secs = seconds_since(t0);
  const Metrics m = metrics_report(run);
  const std::size_t uncertain = m.total(&AgentMetrics::pair_uncertain);
  const std::size_t local = m.total(&AgentMetrics::local_unsafe);
  const double dmin = m.min_distance.value_or(0.0);
  const bool ok = uncertain == 0 && local == 0 && dmin >= cfg.safe_distance && secs < 60.0 &&
                  m.total(&AgentMetrics::pair_false) > 0;
  return {ok, fmt::format("{} no-collision verdicts, {} uncertain, {} local-unsafe, min distance {:.1f}, {:.1f} s",
                          m.total(&AgentMetrics::pair_false), uncertain, local, dmin, secs)};
}

Outcome head_on_lead() {
  ScenarioConfig cfg = support::load("head_on");
  std::size_t misses = 0;
  double worst_lead = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    const SimRun run = run_scenario(cfg, {.keep_reach_records = false});
    double flagged = std::numeric_limits<double>::infinity();
    for (const auto& e : run.events) {
      if (e.kind == EventKind::pair_check && e.payload["collision"] == "uncertain") {
        flagged = e.time;
        break;
      }
    }
    double breach = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < run.truth.samples; ++k) {
      const auto a = run.truth.state(0, k);
      const auto b = run.truth.state(1, k);
      if (std::hypot(a[0] - b[0], a[2] - b[2]) < cfg.safe_distance) {
        breach = run.truth.time(k);
        break;
      }
    }
    if (!std::isfinite(breach) || !(flagged < breach) || breach - flagged < 0.2) ++misses;
    worst_lead = std::min(worst_lead, breach - flagged);
  }
  return {misses == 0, fmt::format("20 seeds, {} misses, smallest lead {:.3f} s", misses, worst_lead)};
}

Outcome collision_audit() {
  const ScenarioConfig nominal = support::load("nominal8");
  const ScenarioConfig near = support::load("near_miss");
  constexpr int kRuns = 100;
  std::vector<AuditReport> reports(kRuns);
  std::vector<std::string> errors(kRuns);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < kRuns; ++i) {
    try {
      ScenarioConfig cfg = i % 2 == 0 ? nominal : near;
      cfg.seed = 5000 + static_cast<std::uint64_t>(i);
      // Distance and region claims only; containment is covered elsewhere.
      const SimRun run = run_scenario(cfg, {.keep_reach_records = false});
      reports[static_cast<std::size_t>(i)] = soundness_audit(run);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  std::size_t claims = 0, violations = 0, failed = 0;
  for (int i = 0; i < kRuns; ++i) {
    claims += reports[static_cast<std::size_t>(i)].distance_claims;
    violations += reports[static_cast<std::size_t>(i)].distance_violations;
    failed += errors[static_cast<std::size_t>(i)].empty() ? 0 : 1;
  }
  return {violations == 0 && failed == 0 && claims > 0,
          fmt::format("{} runs (half nominal, half near-miss), {} no-collision verdicts, {} violations",
                      kRuns, claims, violations)};
}

Outcome geospatial() {
  const SimRun concurrent = run_scenario(support::load("geospatial_concurrent"));
  const SimRun staggered = run_scenario(support::load("geospatial_staggered"));
  const Metrics mc = metrics_report(concurrent);
  const Metrics ms = metrics_report(staggered);
  std::size_t positive = 0, safe = 0;
  for (const auto& e : staggered.events) {
    if (e.kind != EventKind::global_check || e.payload["global_safe"] != "true") continue;
    ++safe;
    const double t_gs = e.payload["t_global_safe"].get<double>();
    if (t_gs > 0.0 && t_gs > e.payload["t_c"].get<double>()) ++positive;
  }
  const AuditReport ac = soundness_audit(concurrent);
  const AuditReport as = soundness_audit(staggered);
  const bool ok = mc.total(&AgentMetrics::global_uncertain) > 0 && safe > 0 && positive == safe &&
                  ms.total(&AgentMetrics::global_uncertain) == 0 && ac.region_violations == 0 &&
                  as.region_violations == 0 && ac.clean() && as.clean();
  return {ok, fmt::format("concurrent: {} uncertain; staggered: {} true with positive horizon, {} uncertain; "
                          "{} global violations",
                          mc.total(&AgentMetrics::global_uncertain), positive,
                          ms.total(&AgentMetrics::global_uncertain),
                          ac.region_violations + as.region_violations)};
}

Outcome usefulness_filter() {
  auto run_with_delay = [](double delay) {
    ScenarioConfig cfg = support::load("near_miss");
    cfg.duration = 12.0;
    cfg.channel.delay_source = DelaySource::law;
    cfg.channel.min_delay = cfg.channel.max_delay = delay;
    return metrics_report(run_scenario(cfg, {.keep_reach_records = false}).events);
  };
  const Metrics slow = run_with_delay(2.1);
  const Metrics fast = run_with_delay(0.001);
  const std::size_t slow_delivered = slow.total(&AgentMetrics::delivered);
  const std::size_t fast_delivered = fast.total(&AgentMetrics::delivered);
  const bool ok = slow_delivered > 0 && slow.total(&AgentMetrics::stale) == slow_delivered &&
                  slow.total(&AgentMetrics::useful) == 0 && fast_delivered > 0 &&
                  fast.total(&AgentMetrics::useful) == fast_delivered &&
                  fast.total(&AgentMetrics::stale) == 0;
  return {ok, fmt::format("2.1 s delay: {}/{} stale; 1 ms delay: {}/{} useful", slow.total(&AgentMetrics::stale),
                          slow_delivered, fast.total(&AgentMetrics::useful), fast_delivered)};
}

Outcome wire_format() {
  support::Rng rng(1010);
  std::size_t mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    ReachMessage m;
    m.sender = static_cast<AgentId>(rng.gen()() & 0xFFFFFFFFu);
    m.t_rs = rng.uniform(-1e4, 1e4);
    m.t_send = m.t_rs + rng.uniform(0, 1);
    m.horizon = rng.uniform(0.01, 10);
    m.hull = rng.box(1 + rng.gen()() % 8, -1e6, 1e6);
    if (decode(encode(m)) != m) ++mismatches;
  }
  const ReachMessage four{3, 10.0, 2.0, HyperRectangle{{0, 1}, {-2.5, 3.75}, {100, 100.5}, {-0.125, 0}}, 10.25};
  const ReachMessage one{7, 0.0, 0.0, HyperRectangle{{0, 0}}, 0.0};
  const auto enc4 = encode(four);
  const bool golden = enc4 == support::read_hex("golden_n4.hex") && encode(one) == support::read_hex("golden_n1.hex");
  return {mismatches == 0 && enc4.size() == 96 && golden,
          fmt::format("10000 round trips, {} mismatches; n=4 is {} bytes; golden fixtures {}", mismatches,
                      enc4.size(), golden ? "match" : "differ")};
}

Outcome determinism() {
  auto text = [](const ScenarioConfig& cfg) {
    std::string s;
    for (const auto& e : run_scenario(cfg, {.keep_reach_records = false}).events) s += event_to_line(e) + '\n';
    return s;
  };
  const ScenarioConfig cfg = support::load("nominal8");
  const std::string a = text(cfg);
  const std::string b = text(cfg);
  return {a == b && !a.empty(), fmt::format("two runs, {} bytes each, {}", a.size(), a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"reach soundness", reach_soundness},
      {"anytime refinement", anytime_refinement},
      {"verification time table", vt_table},
      {"agent capacity bounds", capacity},
      {"nominal eight-agent mission", nominal_mission},
      {"head-on detection lead", head_on_lead},
      {"collision soundness audit", collision_audit},
      {"geospatial property", geospatial},
      {"usefulness filtering", usefulness_filter},
      {"wire format", wire_format},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s AC%02zu %-28s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
