#include "reachguard/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace reachguard {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_angle(const Interval& a, const char* what) {
  if (!(std::abs(a.lo) < kHalfPi && std::abs(a.hi) < kHalfPi)) {
    throw ModelError(std::string(what) + " range reaches +-pi/2; tan/sec unbounded");
  }
}

// Smallest |v| over the interval.
double min_abs(const Interval& a) {
  if (a.lo <= 0.0 && 0.0 <= a.hi) return 0.0;
  return std::min(std::abs(a.lo), std::abs(a.hi));
}

double max_abs(const Interval& a) { return std::max(std::abs(a.lo), std::abs(a.hi)); }

double vy_rate(double theta, double phi) { return kGravity * std::tan(phi) / std::cos(theta); }

}  // namespace

InputSet point_input(std::span<const double> u) {
  InputSet s;
  s.reserve(u.size());
  for (double v : u) s.push_back(Interval::point(v));
  return s;
}

QuadState QuadState::from(std::span<const double> s) {
  if (s.size() != 4) throw InvalidInput("quadcopter state has 4 components");
  return {s[0], s[1], s[2], s[3]};
}

bool ControlInput::valid() const {
  return std::isfinite(theta) && std::isfinite(phi) && std::abs(theta) < kHalfPi &&
         std::abs(phi) < kHalfPi;
}

void PidGains::validate() const {
  if (!(output_clamp > 0.0 && output_clamp < kHalfPi)) {
    throw InvalidInput("PID output clamp must lie in (0, pi/2)");
  }
}

std::array<double, 4> quad_deriv(const QuadState& s, const ControlInput& u) {
  return {s.vx, kGravity * std::tan(u.theta), s.vy, vy_rate(u.theta, u.phi)};
}

HyperRectangle quad_deriv_bounds(const HyperRectangle& box, const ControlInput& u) {
  const InputSet us{Interval::point(u.theta), Interval::point(u.phi)};
  return quad_deriv_bounds(box, us);
}

HyperRectangle quad_deriv_bounds(const HyperRectangle& box, std::span<const Interval> u) {
  if (box.dim() != 4) throw InvalidInput("quadcopter box must be 4-dimensional");
  if (u.size() != 2) throw InvalidInput("quadcopter input is (theta, phi)");
  const Interval& theta = u[0];
  const Interval& phi = u[1];
  check_angle(theta, "pitch");
  check_angle(phi, "roll");

  const Interval ax(kGravity * std::tan(theta.lo), kGravity * std::tan(theta.hi));

  // For fixed phi, |g tan(phi) / cos(theta)| grows with |theta|, so the
  // extremes sit at the corners (phi endpoint, extreme |theta|).
  const double ts[2] = {min_abs(theta), max_abs(theta)};
  const double ps[2] = {phi.lo, phi.hi};
  double lo = vy_rate(ts[0], ps[0]);
  double hi = lo;
  for (double t : ts) {
    for (double p : ps) {
      const double v = vy_rate(t, p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return HyperRectangle{box[1], ax, box[3], Interval(lo, hi)};
}

PidOutput pid_step(const QuadState& s, const Waypoint& waypoint, const PidGains& gains, double dt,
                   const PidMemory& memory) {
  if (!(dt > 0.0)) throw InvalidInput("pid_step: dt must be positive");
  const double ex = waypoint.x - s.x;
  const double ey = waypoint.y - s.y;
  PidMemory next{memory.integral_x + ex * dt, memory.integral_y + ey * dt};
  const double c = gains.output_clamp;
  const double theta = gains.kp_x * ex + gains.ki_x * next.integral_x - gains.kd_x * s.vx;
  const double phi = gains.kp_y * ey + gains.ki_y * next.integral_y - gains.kd_y * s.vy;
  return {{std::clamp(theta, -c, c), std::clamp(phi, -c, c)}, next};
}

ModelSpec quadcopter4d_model() {
  ModelSpec m;
  m.name = "quadcopter4d";
  m.state_dim = 4;
  m.input_dim = 2;
  m.deriv = [](std::span<const double> x, std::span<const double> u, std::span<double> dx) {
    dx[0] = x[1];
    dx[1] = kGravity * std::tan(u[0]);
    dx[2] = x[3];
    dx[3] = vy_rate(u[0], u[1]);
  };
  m.deriv_bounds = [](const HyperRectangle& box, std::span<const Interval> u) {
    return quad_deriv_bounds(box, u);
  };
  return m;
}

ModelSpec constant1d_model(double rate) {
  ModelSpec m;
  m.name = "constant1d";
  m.state_dim = 1;
  m.input_dim = 0;
  m.deriv = [rate](std::span<const double>, std::span<const double>, std::span<double> dx) {
    dx[0] = rate;
  };
  m.deriv_bounds = [rate](const HyperRectangle& box, std::span<const Interval>) {
    if (box.dim() != 1) throw InvalidInput("constant1d box must be 1-dimensional");
    return HyperRectangle{Interval::point(rate)};
  };
  return m;
}

ModelSpec harmonic2d_model() {
  ModelSpec m;
  m.name = "harmonic2d";
  m.state_dim = 2;
  m.input_dim = 0;
  m.deriv = [](std::span<const double> x, std::span<const double>, std::span<double> dx) {
    dx[0] = x[1];
    dx[1] = -x[0];
  };
  m.deriv_bounds = [](const HyperRectangle& box, std::span<const Interval>) {
    if (box.dim() != 2) throw InvalidInput("harmonic2d box must be 2-dimensional");
    return HyperRectangle{box[1], Interval(-box[0].hi, -box[0].lo)};
  };
  return m;
}

ModelSpec model_by_name(std::string_view name) {
  if (name == "quadcopter4d") return quadcopter4d_model();
  if (name == "constant1d") return constant1d_model();
  if (name == "harmonic2d") return harmonic2d_model();
  throw InvalidInput("unknown model '" + std::string(name) + "'");
}

std::vector<std::string> model_names() { return {"constant1d", "harmonic2d", "quadcopter4d"}; }

}  // namespace reachguard
