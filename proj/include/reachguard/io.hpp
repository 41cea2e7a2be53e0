#pragma once

// Run artifacts on disk:
//   events.jsonl  one JSON object per event: t, agent, kind plus payload fields
//   truth.csv     time,agent,s0,s1,...
//   metrics.csv   one row per agent (see write_metrics_csv)
//   reach.csv     agent,t_rs,kind,t_offset,t_end,axis,lo,hi (box and hull rows)

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "reachguard/metrics.hpp"
#include "reachguard/sim.hpp"

namespace reachguard {

// Shortest text that parses back to the same double.
std::string format_number(double v);

std::string event_to_line(const EventRecord& ev);
// Throws ConfigError on a malformed line.
EventRecord event_from_line(std::string_view line);

void write_events(const std::filesystem::path& path, std::span<const EventRecord> events);
std::vector<EventRecord> read_events(const std::filesystem::path& path);

// Every `stride`-th truth sample (stride >= 1).
void write_truth_csv(const std::filesystem::path& path, const GroundTruth& truth, std::size_t stride);
void write_metrics_csv(const std::filesystem::path& path, const Metrics& m);
void write_reach_csv(const std::filesystem::path& path, std::span<const ReachRecord> records);

struct ReachRow {
  AgentId agent = 0;
  double t_rs = 0.0;
  std::string kind;  // "box" or "hull"
  double t_offset = 0.0;
  double t_end = 0.0;
  std::size_t axis = 0;
  double lo = 0.0;
  double hi = 0.0;
};

std::vector<ReachRow> read_reach_csv(const std::filesystem::path& path);
// Reads the min_distance column of metrics.csv; nullopt when empty or absent.
std::optional<double> read_min_distance(const std::filesystem::path& metrics_csv);

}  // namespace reachguard
