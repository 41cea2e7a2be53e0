#include <gtest/gtest.h>

#include <fstream>

#include "reachguard/io.hpp"
#include "support.hpp"

using namespace reachguard;
namespace fs = std::filesystem;
using support::invoke;

namespace {

fs::path write_config(const std::string& name, const nlohmann::json& j) {
  const fs::path dir = support::scratch_dir(name + "_cfg");
  fs::create_directories(dir);
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, ',');) out.push_back(c);
  return out;
}

nlohmann::json constant_config() {
  return nlohmann::json::parse(R"({
    "name": "constant", "duration": 1.0, "position_axes": [0],
    "agents": [{"id": 3, "model": "constant1d", "initial_state": [0],
                "h0": 0.25, "budget": {"mode": "deterministic", "passes": 1}}]})");
}

}  // namespace

TEST(Cli, RunNominalIsClean) {
  const fs::path out = support::scratch_dir("run_nominal");
  const auto r = invoke({"run", "--config", support::config_path("nominal8").string(), "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "events.jsonl"));
  EXPECT_TRUE(fs::exists(out / "truth.csv"));
  EXPECT_TRUE(fs::exists(out / "metrics.csv"));
  EXPECT_FALSE(fs::exists(out / "reach.csv"));
}

TEST(Cli, RunHeadOnSignalsUncertain) {
  const fs::path out = support::scratch_dir("run_head_on");
  const auto r = invoke({"run", "--config", support::config_path("head_on").string(), "--out", out.string()});
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST(Cli, RunMissingConfigFails) {
  const auto r = invoke({"run", "--config", "/nonexistent/x.json", "--out", support::scratch_dir("missing").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, BadInvocationFails) {
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"fly"}).code, 1);
  EXPECT_EQ(invoke({"run", "--out", "/tmp"}).code, 1);
}

TEST(Cli, RunWithSameSeedReproducesFiles) {
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const fs::path a = support::scratch_dir("repro_a"), b = support::scratch_dir("repro_b");
  const std::string cfg = support::config_path("near_miss").string();
  invoke({"run", "--config", cfg, "--out", a.string(), "--seed", "9"});
  invoke({"run", "--config", cfg, "--out", b.string(), "--seed", "9"});
  for (const char* f : {"events.jsonl", "truth.csv", "metrics.csv"}) {
    EXPECT_EQ(read(a / f), read(b / f)) << f;
  }
}

TEST(Cli, ReportTableOne) {
  const fs::path out = support::scratch_dir("report_table1");
  ASSERT_NE(invoke({"run", "--config", support::config_path("table1").string(), "--out", out.string()}).code, 1);
  const auto r = invoke({"report", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_FALSE(lines.empty());
  EXPECT_NE(lines[0].find("Agent 1"), std::string::npos);
  const auto vt = std::find_if(lines.begin(), lines.end(), [](const std::string& l) { return l.rfind("VT", 0) == 0; });
  ASSERT_NE(vt, lines.end());
  std::istringstream row(vt->substr(vt->find(')') + 1));
  std::string first;
  row >> first;
  EXPECT_EQ(first, "28.9363");
  EXPECT_NE(r.out.find("min distance:"), std::string::npos);
}

TEST(Cli, ReportSingleAgentUsesDashes) {
  const fs::path cfg = write_config("solo", constant_config());
  const fs::path out = support::scratch_dir("report_solo");
  ASSERT_EQ(invoke({"run", "--config", cfg.string(), "--out", out.string()}).code, 0);
  const auto r = invoke({"report", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& l : lines_of(r.out)) {
    if (l.rfind("VT", 0) == 0 || l.rfind("tau_tf", 0) == 0 || l.rfind("useful", 0) == 0) {
      EXPECT_NE(l.find('-'), std::string::npos) << l;
    }
  }
}

TEST(Cli, ReportEmptyDirFails) {
  const fs::path out = support::scratch_dir("report_empty");
  fs::create_directories(out);
  const auto r = invoke({"report", "--out", out.string()});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, ReportRecomputesFromEventsAlone) {
  const fs::path out = support::scratch_dir("report_events_only");
  invoke({"run", "--config", support::config_path("table1").string(), "--out", out.string()});
  const auto with = invoke({"report", "--out", out.string()});
  fs::remove(out / "metrics.csv");
  fs::remove(out / "truth.csv");
  const auto without = invoke({"report", "--out", out.string()});
  ASSERT_EQ(without.code, 0);
  // Only the min-distance line depends on the truth scan.
  EXPECT_EQ(with.out.substr(0, with.out.find("min distance")),
            without.out.substr(0, without.out.find("min distance")));
}

TEST(Cli, DumpReachConstantModel) {
  const fs::path cfg = write_config("dump", constant_config());
  const fs::path out = support::scratch_dir("dump_constant");
  ASSERT_EQ(invoke({"run", "--config", cfg.string(), "--out", out.string(), "--store-reach"}).code, 0);
  const auto r = invoke({"dump-reach", "--out", out.string(), "--agent", "3", "--from", "0", "--to", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_GT(lines.size(), 2u);
  EXPECT_EQ(lines[0], "t_rs,kind,t_offset,t_end,axis,lo,hi");

  double prev_lo = -1e300, prev_hi = -1e300;
  double box_min = 1e300, box_max = -1e300;
  bool saw_hull = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto c = cells(lines[i]);
    ASSERT_EQ(c.size(), 7u);
    const double lo = std::stod(c[5]), hi = std::stod(c[6]);
    if (c[1] == "box") {
      EXPECT_GE(lo, prev_lo);
      EXPECT_GE(hi, prev_hi);
      prev_lo = lo;
      prev_hi = hi;
      box_min = std::min(box_min, lo);
      box_max = std::max(box_max, hi);
    } else {
      ASSERT_EQ(c[1], "hull");
      EXPECT_EQ(lo, box_min);
      EXPECT_EQ(hi, box_max);
      saw_hull = true;
    }
  }
  EXPECT_TRUE(saw_hull);
}

TEST(Cli, DumpReachEmptyRangeAndUnknownAgent) {
  const fs::path cfg = write_config("dump2", constant_config());
  const fs::path out = support::scratch_dir("dump_ranges");
  ASSERT_EQ(invoke({"run", "--config", cfg.string(), "--out", out.string(), "--store-reach"}).code, 0);
  const auto empty = invoke({"dump-reach", "--out", out.string(), "--agent", "3", "--from", "50", "--to", "60"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.out, "t_rs,kind,t_offset,t_end,axis,lo,hi\n");
  EXPECT_EQ(invoke({"dump-reach", "--out", out.string(), "--agent", "9"}).code, 1);
  EXPECT_EQ(invoke({"dump-reach", "--out", support::scratch_dir("nothing").string(), "--agent", "3"}).code, 1);
}

TEST(Cli, CapacityPaperProfile) {
  const auto r = invoke({"capacity", "--profile", support::config_path("capacity_paper").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  double n_min = 0, n_max = 0;
  std::string key;
  std::istringstream in(r.out);
  in >> key >> n_min;
  EXPECT_EQ(key, "n_min");
  in >> key >> n_max;
  EXPECT_EQ(key, "n_max");
  EXPECT_NEAR(n_min, 64.0, 2.0);
  EXPECT_NEAR(n_max, 168.0, 2.0);
}

TEST(Cli, CapacityGuardsAndSymmetry) {
  nlohmann::json j = support::load_json("capacity_paper");
  j["worst"]["tau_tf"] = 0.0;
  j["worst"]["tau_d"] = 0.0;
  j["worst"]["tau_c"] = 0.0;
  auto r = invoke({"capacity", "--profile", write_config("cap_zero", j).string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());

  j = support::load_json("capacity_paper");
  j["best"] = j["worst"];
  r = invoke({"capacity", "--profile", write_config("cap_sym", j).string()});
  ASSERT_EQ(r.code, 0);
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].substr(6), lines[1].substr(6));

  EXPECT_EQ(invoke({"capacity", "--profile", "/nonexistent.json"}).code, 1);
}

TEST(Cli, AuditWritesReport) {
  const fs::path out = support::scratch_dir("audit_out");
  const auto r = invoke({"audit", "--config", support::config_path("near_miss").string(), "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(fs::exists(out / "audit.json"));
  EXPECT_NE(r.out.find("distance: 0 violations"), std::string::npos);
}
