#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reachguard/cli.hpp"
#include "reachguard/dynamics.hpp"
#include "reachguard/geometry.hpp"
#include "reachguard/scenario.hpp"

namespace support {

inline std::filesystem::path config_path(const std::string& name) {
  return std::filesystem::path(REACHGUARD_CONFIG_DIR) / (name + ".json");
}

inline reachguard::ScenarioConfig load(const std::string& name) {
  return reachguard::load_scenario(config_path(name));
}

inline nlohmann::json load_json(const std::string& name) {
  return reachguard::read_json_file(config_path(name));
}

inline std::vector<std::uint8_t> read_hex(const std::string& file) {
  std::ifstream in(std::filesystem::path(REACHGUARD_TEST_DATA) / file);
  std::vector<std::uint8_t> out;
  std::string tok;
  while (in >> tok) out.push_back(static_cast<std::uint8_t>(std::stoul(tok, nullptr, 16)));
  return out;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("reachguard_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "reachguard");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = reachguard::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  reachguard::Interval interval(double lo, double hi) {
    double a = uniform(lo, hi), b = uniform(lo, hi);
    if (a > b) std::swap(a, b);
    return {a, b};
  }
  reachguard::HyperRectangle box(std::size_t n, double lo, double hi) {
    std::vector<reachguard::Interval> d;
    for (std::size_t k = 0; k < n; ++k) d.push_back(interval(lo, hi));
    return reachguard::HyperRectangle(std::move(d));
  }
  std::vector<double> point_in(const reachguard::HyperRectangle& b) {
    std::vector<double> p;
    for (const auto& iv : b.intervals()) p.push_back(uniform(iv.lo, iv.hi));
    return p;
  }
  std::mt19937_64& gen() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Exact quadcopter solution under a constant input: both axes have constant
// acceleration, so position is quadratic and velocity linear in time.
inline std::vector<double> quad_closed_form(std::span<const double> s0, double theta, double phi,
                                            double t) {
  const double ax = 9.81 * std::tan(theta);
  const double ay = 9.81 * std::tan(phi) / std::cos(theta);
  return {s0[0] + s0[1] * t + 0.5 * ax * t * t, s0[1] + ax * t,
          s0[2] + s0[3] * t + 0.5 * ay * t * t, s0[3] + ay * t};
}

}  // namespace support
