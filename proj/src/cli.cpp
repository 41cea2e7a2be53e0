#include "reachguard/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fmt/format.h>
#include <ostream>

#include "reachguard/audit.hpp"
#include "reachguard/io.hpp"
#include "reachguard/metrics.hpp"
#include "reachguard/scenario.hpp"
#include "reachguard/sim.hpp"
#include "reachguard/verify.hpp"

namespace reachguard::cli {

namespace fs = std::filesystem;

namespace {

ScenarioConfig load_with_seed(const fs::path& config, std::optional<std::uint64_t> seed) {
  ScenarioConfig cfg = load_scenario(config);
  if (seed) cfg.seed = *seed;
  return cfg;
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "-";
  std::string s = fmt::format("{:.4f}", *v);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

void print_audit(const AuditReport& r, std::ostream& out) {
  out << "containment: " << r.containment.violations << " violations in " << r.containment.checked
      << " samples (worst excess " << format_number(r.containment.worst_excess) << ")\n"
      << "distance: " << r.distance_violations << " violations in " << r.distance_claims
      << " no-collision verdicts\n"
      << "global: " << r.region_violations << " violations in " << r.region_claims
      << " global-safe verdicts\n";
}

}  // namespace

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioConfig cfg = load_with_seed(args.config, args.seed);
    fs::create_directories(args.out_dir);
    SimOptions opt;
    opt.keep_reach_records = args.store_reach;
    const SimRun run = run_scenario(cfg, opt);
    const Metrics m = metrics_report(run);
    write_events(args.out_dir / "events.jsonl", run.events);
    write_truth_csv(args.out_dir / "truth.csv", run.truth, args.truth_stride);
    write_metrics_csv(args.out_dir / "metrics.csv", m);
    if (args.store_reach) write_reach_csv(args.out_dir / "reach.csv", run.reach_records);
    out << cfg.name << ": " << run.events.size() << " events, "
        << m.total(&AgentMetrics::pair_uncertain) << " uncertain pair verdicts, "
        << m.total(&AgentMetrics::global_uncertain) << " uncertain global verdicts, "
        << m.total(&AgentMetrics::local_unsafe) << " local-unsafe flags\n";
    return m.any_uncertain() ? kExitUncertain : kExitOk;
  } catch (const std::exception& e) {
    err << "reachguard run: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_audit(const fs::path& config, std::optional<std::uint64_t> seed,
              const std::optional<fs::path>& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const ScenarioConfig cfg = load_with_seed(config, seed);
    const SimRun run = run_scenario(cfg);
    const AuditReport r = soundness_audit(run);
    print_audit(r, out);
    if (out_dir) {
      fs::create_directories(*out_dir);
      nlohmann::json j{{"containment_checked", r.containment.checked},
                       {"containment_violations", r.containment.violations},
                       {"containment_worst_excess", r.containment.worst_excess},
                       {"distance_claims", r.distance_claims},
                       {"distance_violations", r.distance_violations},
                       {"region_claims", r.region_claims},
                       {"region_violations", r.region_violations}};
      std::ofstream f(*out_dir / "audit.json");
      f << j.dump(2) << '\n';
    }
    return r.clean() ? kExitOk : kExitViolation;
  } catch (const std::exception& e) {
    err << "reachguard audit: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_report(const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const fs::path events_path = out_dir / "events.jsonl";
    if (!fs::exists(events_path)) throw ConfigError("no events.jsonl in " + out_dir.string());
    const auto events = read_events(events_path);
    std::optional<double> dmin;
    if (fs::exists(out_dir / "metrics.csv")) dmin = read_min_distance(out_dir / "metrics.csv");
    const Metrics m = metrics_report(events, dmin);
    const bool comm = m.n_agents >= 2;

    constexpr int kLabel = 22;
    constexpr int kCol = 12;
    out << fmt::format("{:<{}}", "Time", kLabel);
    for (const auto& a : m.agents) out << fmt::format("{:>{}}", "Agent " + std::to_string(a.id), kCol);
    out << '\n';
    auto row = [&](const char* label, auto get, bool comm_column) {
      out << fmt::format("{:<{}}", label, kLabel);
      for (const auto& a : m.agents) {
        out << fmt::format("{:>{}}", comm_column && !comm ? "-" : cell(get(a)), kCol);
      }
      out << '\n';
    };
    row("tau_rs (ms)", [](const AgentMetrics& a) { return a.tau_rs; }, false);
    row("tau_e (ms)", [](const AgentMetrics& a) { return a.tau_e; }, true);
    row("tau_d (ms)", [](const AgentMetrics& a) { return a.tau_d; }, true);
    row("tau_tf (ms)", [](const AgentMetrics& a) { return a.tau_tf; }, true);
    row("tau_c (ms)", [](const AgentMetrics& a) { return a.tau_c; }, true);
    row("VT (ms)", [](const AgentMetrics& a) { return a.vt; }, true);
    auto count_row = [&](const char* label, std::size_t AgentMetrics::*f, bool comm_column) {
      out << fmt::format("{:<{}}", label, kLabel);
      for (const auto& a : m.agents) {
        out << fmt::format("{:>{}}", comm_column && !comm ? "-" : std::to_string(a.*f), kCol);
      }
      out << '\n';
    };
    count_row("useful msgs", &AgentMetrics::useful, true);
    count_row("stale msgs", &AgentMetrics::stale, true);
    count_row("malformed msgs", &AgentMetrics::malformed, true);
    count_row("collision=false", &AgentMetrics::pair_false, true);
    count_row("collision=uncertain", &AgentMetrics::pair_uncertain, true);
    count_row("global=true", &AgentMetrics::global_true, true);
    count_row("global=uncertain", &AgentMetrics::global_uncertain, true);
    count_row("local unsafe", &AgentMetrics::local_unsafe, false);
    count_row("waypoints reached", &AgentMetrics::waypoints, false);
    out << "min distance: " << (m.min_distance ? format_number(*m.min_distance) : "-") << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "reachguard report: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_dump_reach(const fs::path& out_dir, std::uint32_t agent, std::optional<double> from,
                   std::optional<double> to, std::ostream& out, std::ostream& err) {
  try {
    const fs::path path = out_dir / "reach.csv";
    if (!fs::exists(path)) {
      throw ConfigError("no reach.csv in " + out_dir.string() + " (run with --store-reach)");
    }
    const auto rows = read_reach_csv(path);
    if (std::none_of(rows.begin(), rows.end(), [&](const ReachRow& r) { return r.agent == agent; })) {
      throw ConfigError("unknown agent " + std::to_string(agent));
    }
    out << "t_rs,kind,t_offset,t_end,axis,lo,hi\n";
    for (const auto& r : rows) {
      if (r.agent != agent) continue;
      if (from && r.t_rs < *from) continue;
      if (to && r.t_rs > *to) continue;
      out << format_number(r.t_rs) << ',' << r.kind << ',' << format_number(r.t_offset) << ','
          << format_number(r.t_end) << ',' << r.axis << ',' << format_number(r.lo) << ','
          << format_number(r.hi) << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "reachguard dump-reach: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_capacity(const fs::path& profile, std::ostream& out, std::ostream& err) {
  try {
    const auto j = read_json_file(profile);
    if (!j.contains("worst") || !j.contains("best") || !j.contains("T_c") || !j.contains("t_runtime")) {
      throw ConfigError("capacity profile needs worst, best, T_c and t_runtime");
    }
    const TimingProfile worst = parse_timing_profile(j.at("worst"));
    const TimingProfile best = parse_timing_profile(j.at("best"));
    const CapacityBounds b = agent_capacity_bounds(worst, best, j.at("T_c").get<double>(),
                                                   j.at("t_runtime").get<double>());
    out << "n_min " << format_number(b.n_min) << '\n' << "n_max " << format_number(b.n_max) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "reachguard capacity: " << e.what() << '\n';
    return kExitError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decentralised real-time reachability and safety verification"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Simulate a scenario and write events, truth and metrics");
  run->add_option("--config", run_args.config, "Scenario JSON")->required();
  run->add_option("--out", run_args.out_dir, "Output directory")->required();
  auto* run_seed = run->add_option("--seed", seed, "Override the scenario seed");
  run->add_flag("--store-reach", run_args.store_reach, "Also write reach.csv");
  run->add_option("--truth-stride", run_args.truth_stride, "Write every n-th truth sample")
      ->check(CLI::PositiveNumber);

  fs::path audit_config;
  std::string audit_out;
  auto* audit = app.add_subcommand("audit", "Re-run a scenario and audit every verdict against truth");
  audit->add_option("--config", audit_config, "Scenario JSON")->required();
  auto* audit_seed = audit->add_option("--seed", seed, "Override the scenario seed");
  audit->add_option("--out", audit_out, "Directory for audit.json");

  fs::path report_dir;
  auto* report = app.add_subcommand("report", "Print the timing and verdict table of a run");
  report->add_option("--out", report_dir, "Run output directory")->required();

  fs::path dump_dir;
  std::uint32_t dump_agent = 0;
  double from = 0.0;
  double to = 0.0;
  auto* dump = app.add_subcommand("dump-reach", "Print stored reach boxes of one agent as CSV");
  dump->add_option("--out", dump_dir, "Run output directory")->required();
  dump->add_option("--agent", dump_agent, "Agent id")->required();
  auto* from_opt = dump->add_option("--from", from, "Earliest t_rs (local seconds)");
  auto* to_opt = dump->add_option("--to", to, "Latest t_rs (local seconds)");

  fs::path profile;
  auto* capacity = app.add_subcommand("capacity", "Bounds on the number of agents");
  capacity->add_option("--profile", profile, "Capacity profile JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  if (run->parsed()) {
    if (*run_seed) run_args.seed = seed;
    return cmd_run(run_args, out, err);
  }
  if (audit->parsed()) {
    std::optional<std::uint64_t> s;
    if (*audit_seed) s = seed;
    std::optional<fs::path> dir;
    if (!audit_out.empty()) dir = audit_out;
    return cmd_audit(audit_config, s, dir, out, err);
  }
  if (report->parsed()) return cmd_report(report_dir, out, err);
  if (dump->parsed()) {
    std::optional<double> f, t;
    if (*from_opt) f = from;
    if (*to_opt) t = to;
    return cmd_dump_reach(dump_dir, dump_agent, f, t, out, err);
  }
  if (capacity->parsed()) return cmd_capacity(profile, out, err);
  return kExitError;
}

}  // namespace reachguard::cli
