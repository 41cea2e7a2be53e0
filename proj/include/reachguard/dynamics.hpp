#pragma once

// Agent motion models and the waypoint PID controller.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reachguard/geometry.hpp"

namespace reachguard {

inline constexpr double kGravity = 9.81;

// A possibly degenerate box of inputs; a held control input is a point set.
// Empty for models without inputs.
using InputSet = std::vector<Interval>;

InputSet point_input(std::span<const double> u);

struct ModelSpec {
  using DerivFn = std::function<void(std::span<const double> x, std::span<const double> u,
                                     std::span<double> dx)>;
  using BoundsFn =
      std::function<HyperRectangle(const HyperRectangle& box, std::span<const Interval> u)>;

  std::string name;
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  DerivFn deriv;
  // Must enclose deriv(x, u) for every x in box and every u in the input set.
  BoundsFn deriv_bounds;
};

// State ordering is fixed as (x, v_x, y, v_y).
struct QuadState {
  double x = 0.0;
  double vx = 0.0;
  double y = 0.0;
  double vy = 0.0;

  std::array<double, 4> as_array() const { return {x, vx, y, vy}; }
  static QuadState from(std::span<const double> s);
};

// Pitch and roll in radians; both must lie strictly inside (-pi/2, pi/2).
struct ControlInput {
  double theta = 0.0;
  double phi = 0.0;

  bool valid() const;
  std::array<double, 2> as_array() const { return {theta, phi}; }
};

struct PidGains {
  double kp_x = 0.3, ki_x = 0.0001, kd_x = 0.5;
  double kp_y = 0.3, ki_y = 0.0001, kd_y = 0.5;
  double output_clamp = 0.35;

  void validate() const;
};

struct PidMemory {
  double integral_x = 0.0;
  double integral_y = 0.0;
};

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
};

struct PidOutput {
  ControlInput u;
  PidMemory memory;
};

// (v_x, g tan(theta), v_y, g tan(phi) / cos(theta))
std::array<double, 4> quad_deriv(const QuadState& s, const ControlInput& u);
HyperRectangle quad_deriv_bounds(const HyperRectangle& box, const ControlInput& u);
HyperRectangle quad_deriv_bounds(const HyperRectangle& box, std::span<const Interval> u);

// Per-axis PID on the position error with the derivative term taken on the
// measured velocity. The integral is advanced by error * dt before use.
PidOutput pid_step(const QuadState& s, const Waypoint& waypoint, const PidGains& gains, double dt,
                   const PidMemory& memory);

ModelSpec quadcopter4d_model();
ModelSpec constant1d_model(double rate = 1.0);
ModelSpec harmonic2d_model();

// Built-in registry: "quadcopter4d", "constant1d", "harmonic2d".
ModelSpec model_by_name(std::string_view name);
std::vector<std::string> model_names();

}  // namespace reachguard
