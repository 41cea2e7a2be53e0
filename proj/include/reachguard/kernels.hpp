#pragma once

// Data-parallel checking kernels. Every kernel has a plain serial reference
// in `kernels::serial` and an OpenMP version in `kernels::parallel`; both
// return identical results (reductions are over integers and min/max only).

#include <cstddef>
#include <span>
#include <vector>

#include "reachguard/dynamics.hpp"
#include "reachguard/reach.hpp"
#include "reachguard/truth.hpp"

namespace reachguard {

// Classic fourth-order Runge-Kutta with a reusable workspace.
class Rk4 {
 public:
  explicit Rk4(const ModelSpec& model);

  void step(std::span<double> x, std::span<const double> u, double dt);
  // Integrates over `duration` with steps no longer than max_dt.
  void advance(std::span<double> x, std::span<const double> u, double duration, double max_dt);

 private:
  const ModelSpec* model_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

// A reach result tied to the global time at which its window opens.
struct ReachRecord {
  AgentId agent = 0;
  double global_start = 0.0;
  ReachResult result;
};

// The pair (a, b) keeps planar distance >= bound over global [t0, t1].
struct DistanceClaim {
  AgentId a = 0;
  AgentId b = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  double bound = 0.0;
};

// No joint state over global [t0, t1] satisfies every unsafe row.
struct RegionClaim {
  double t0 = 0.0;
  double t1 = 0.0;
};

struct ContainmentStats {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // largest distance of a sample outside its box
};

// Relative slack used when testing a sample against a box: a coordinate v
// passes [lo, hi] if lo - tol (1 + |lo|) <= v <= hi + tol (1 + |hi|).
inline constexpr double kContainmentTolerance = 1e-9;

namespace kernels {

namespace serial {

// Integrates each initial point (flat, model.state_dim values per point) with
// RK4 at step dt under constant input u over [0, horizon] and checks every
// sample against the reach segment covering its offset.
ContainmentStats ensemble_containment(const ReachResult& reach, const ModelSpec& model,
                                      std::span<const double> initial_points,
                                      std::span<const double> u, double dt);

// Every truth sample inside a record's window lies in the covering segment.
ContainmentStats reach_containment(const GroundTruth& truth, std::span<const ReachRecord> records);

// Number of claims contradicted by some truth sample.
std::size_t distance_violations(const GroundTruth& truth, std::span<const DistanceClaim> claims,
                                std::span<const std::size_t> position_axes);
std::size_t region_violations(const GroundTruth& truth, std::span<const RegionClaim> claims,
                              const LinearConstraintSet& unsafe);

// Smallest planar distance between any two agents over all samples;
// +infinity with fewer than two agents.
double min_pairwise_distance(const GroundTruth& truth, std::span<const std::size_t> position_axes);

}  // namespace serial

namespace parallel {

ContainmentStats ensemble_containment(const ReachResult& reach, const ModelSpec& model,
                                      std::span<const double> initial_points,
                                      std::span<const double> u, double dt);
ContainmentStats reach_containment(const GroundTruth& truth, std::span<const ReachRecord> records);
std::size_t distance_violations(const GroundTruth& truth, std::span<const DistanceClaim> claims,
                                std::span<const std::size_t> position_axes);
std::size_t region_violations(const GroundTruth& truth, std::span<const RegionClaim> claims,
                              const LinearConstraintSet& unsafe);
double min_pairwise_distance(const GroundTruth& truth, std::span<const std::size_t> position_axes);

}  // namespace parallel

}  // namespace kernels

}  // namespace reachguard
