#include "reachguard/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace reachguard {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  return in;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("bad number '" + s + "'");
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string event_to_line(const EventRecord& ev) {
  json j = ev.payload;
  j["t"] = ev.time;
  j["agent"] = ev.agent;
  j["kind"] = to_string(ev.kind);
  return j.dump();
}

EventRecord event_from_line(std::string_view line) {
  try {
    json j = json::parse(line);
    EventRecord ev;
    ev.time = j.at("t").get<double>();
    ev.agent = j.at("agent").get<AgentId>();
    ev.kind = event_kind_from(j.at("kind").get<std::string>());
    j.erase("t");
    j.erase("agent");
    j.erase("kind");
    ev.payload = std::move(j);
    return ev;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad event line: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("bad event line: ") + e.what());
  }
}

void write_events(const std::filesystem::path& path, std::span<const EventRecord> events) {
  auto out = open_out(path);
  for (const auto& ev : events) out << event_to_line(ev) << '\n';
}

std::vector<EventRecord> read_events(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<EventRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(event_from_line(line));
  }
  return out;
}

void write_truth_csv(const std::filesystem::path& path, const GroundTruth& truth, std::size_t stride) {
  if (stride == 0) throw InvalidInput("truth stride must be at least 1");
  auto out = open_out(path);
  std::size_t width = 0;
  for (std::size_t d : truth.dims) width = std::max(width, d);
  out << "time,agent";
  for (std::size_t k = 0; k < width; ++k) out << ",s" << k;
  out << '\n';
  for (std::size_t k = 0; k < truth.samples; k += stride) {
    for (std::size_t a = 0; a < truth.ids.size(); ++a) {
      out << format_number(truth.time(k)) << ',' << truth.ids[a];
      const auto s = truth.state(a, k);
      for (std::size_t c = 0; c < width; ++c) {
        out << ',';
        if (c < s.size()) out << format_number(s[c]);
      }
      out << '\n';
    }
  }
}

void write_metrics_csv(const std::filesystem::path& path, const Metrics& m) {
  auto out = open_out(path);
  out << "agent,tau_rs_ms,tau_e_ms,tau_tf_ms,tau_d_ms,tau_c_ms,vt_ms,reaches,sent,delivered,useful,"
         "stale,malformed,pair_false,pair_uncertain,global_true,global_uncertain,local_unsafe,"
         "budget_overruns,waypoints,min_distance\n";
  for (const auto& a : m.agents) {
    out << a.id << ',' << opt(a.tau_rs) << ',' << opt(a.tau_e) << ',' << opt(a.tau_tf) << ','
        << opt(a.tau_d) << ',' << opt(a.tau_c) << ',' << opt(a.vt) << ',' << a.reaches << ','
        << a.sent << ',' << a.delivered << ',' << a.useful << ',' << a.stale << ',' << a.malformed
        << ',' << a.pair_false << ',' << a.pair_uncertain << ',' << a.global_true << ','
        << a.global_uncertain << ',' << a.local_unsafe << ',' << a.budget_overruns << ','
        << a.waypoints << ',' << opt(m.min_distance) << '\n';
  }
}

void write_reach_csv(const std::filesystem::path& path, std::span<const ReachRecord> records) {
  auto out = open_out(path);
  out << "agent,t_rs,kind,t_offset,t_end,axis,lo,hi\n";
  for (const auto& rec : records) {
    const auto& r = rec.result;
    const std::string prefix = std::to_string(rec.agent) + ',' + format_number(r.t_rs) + ',';
    for (const auto& seg : r.intermediates) {
      for (std::size_t k = 0; k < seg.box.dim(); ++k) {
        out << prefix << "box," << format_number(seg.t_begin) << ',' << format_number(seg.t_end)
            << ',' << k << ',' << format_number(seg.box[k].lo) << ','
            << format_number(seg.box[k].hi) << '\n';
      }
    }
    for (std::size_t k = 0; k < r.hull.dim(); ++k) {
      out << prefix << "hull,0," << format_number(r.horizon) << ',' << k << ','
          << format_number(r.hull[k].lo) << ',' << format_number(r.hull[k].hi) << '\n';
    }
  }
}

std::vector<ReachRow> read_reach_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::getline(in, line);
  std::vector<ReachRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 8) throw ConfigError("reach.csv: expected 8 columns");
    rows.push_back({static_cast<AgentId>(std::stoul(c[0])), parse_double(c[1]), c[2],
                    parse_double(c[3]), parse_double(c[4]), std::stoul(c[5]), parse_double(c[6]),
                    parse_double(c[7])});
  }
  return rows;
}

std::optional<double> read_min_distance(const std::filesystem::path& metrics_csv) {
  auto in = open_in(metrics_csv);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("metrics.csv is empty");
  const auto header = split_csv(line);
  auto col = std::find(header.begin(), header.end(), "min_distance");
  if (col == header.end()) return std::nullopt;
  const auto idx = static_cast<std::size_t>(col - header.begin());
  if (!std::getline(in, line)) return std::nullopt;
  const auto cells = split_csv(line);
  if (idx >= cells.size() || cells[idx].empty()) return std::nullopt;
  return parse_double(cells[idx]);
}

}  // namespace reachguard
