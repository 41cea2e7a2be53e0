#pragma once

// Anytime reachability by face lifting over hyper-rectangles.
//
// A sweep advances the current box from offset 0 to the horizon T with
// single face-lifting steps. Every step first validates a neighbourhood N of
// the current box such that cr + [0, dt] * f(N) stays inside N; all
// trajectories from cr then remain in N for dt seconds, and each face of cr
// moves by its derivative bound over N times dt. The anytime driver repeats
// the sweep with the step halved while budget remains and keeps the last
// sweep that ran to completion.

#include <cstdint>
#include <optional>
#include <vector>

#include "reachguard/dynamics.hpp"
#include "reachguard/geometry.hpp"

namespace reachguard {

enum class Safety { safe, uncertain };

const char* to_string(Safety s);

enum class BudgetMode { deterministic, wallclock };

struct RuntimeBudget {
  BudgetMode mode = BudgetMode::deterministic;
  // Refinement passes (deterministic) or milliseconds (wallclock).
  double limit = 3.0;

  static RuntimeBudget passes(int n) { return {BudgetMode::deterministic, static_cast<double>(n)}; }
  static RuntimeBudget wallclock_ms(double ms) { return {BudgetMode::wallclock, ms}; }
  void validate() const;
};

// Hard cap on refinement passes in wallclock mode.
inline constexpr int kMaxRefinementPasses = 12;
// Below this a face-lifting step is considered collapsed.
inline constexpr double kMinStep = 1e-12;

struct ReachSegment {
  double t_begin = 0.0;  // offset from t_rs, seconds
  double t_end = 0.0;
  HyperRectangle box;    // encloses every trajectory over [t_begin, t_end]
};

struct ReachResult {
  HyperRectangle hull;
  std::vector<ReachSegment> intermediates;
  double t_rs = 0.0;
  double horizon = 0.0;
  Safety local_safe = Safety::safe;
  int passes_completed = 0;
  double final_step = 0.0;
  bool budget_overrun = false;
  double elapsed_ms = 0.0;  // wall time spent, informational
  // Hull of every completed pass in order; back() == hull.
  std::vector<HyperRectangle> pass_hulls;

  // Segment whose time window covers `offset` (clamped to [0, horizon]).
  const ReachSegment& segment_at(double offset) const;
};

struct FaceLiftStep {
  HyperRectangle advanced;
  HyperRectangle step_hull;
  double new_remaining = 0.0;
  double dt = 0.0;
};

FaceLiftStep single_face_lift(const HyperRectangle& cr, double step, double remaining,
                              std::span<const Interval> input, const ModelSpec& model);

ReachResult reach_anytime(const HyperRectangle& initial, std::span<const Interval> input,
                          double t_rs, double horizon, double h0, const RuntimeBudget& budget,
                          const std::optional<LinearConstraintSet>& unsafe_local,
                          const ModelSpec& model);

// True iff every per-axis hull width of `fine` is within 1e-9 of `coarse`.
bool refine_monotone_check(const ReachResult& coarse, const ReachResult& fine);

}  // namespace reachguard
