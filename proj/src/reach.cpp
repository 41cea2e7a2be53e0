#include "reachguard/reach.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <string>

namespace reachguard {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kValidationIterations = 8;

// Derivative bounds over a neighbourhood that provably contains every
// trajectory from cr for dt seconds, or nullopt if none was found within the
// iteration limit.
std::optional<HyperRectangle> validated_bounds(const HyperRectangle& cr, double dt,
                                               std::span<const Interval> input,
                                               const ModelSpec& model) {
  HyperRectangle neighbourhood = cr;
  const std::size_t n = cr.dim();
  for (int iter = 0; iter < kValidationIterations; ++iter) {
    std::optional<HyperRectangle> rate;
    try {
      rate.emplace(model.deriv_bounds(neighbourhood, input));
    } catch (const InvalidInput& e) {
      throw ModelError(model.name + ": derivative bounds not finite (" + e.what() + ")");
    }
    if (rate->dim() != n) throw ModelError(model.name + ": derivative bounds have wrong dimension");

    std::vector<Interval> candidate;
    candidate.reserve(n);
    bool inside = true;
    for (std::size_t k = 0; k < n; ++k) {
      const double lo = cr[k].lo + std::min(0.0, dt * (*rate)[k].lo);
      const double hi = cr[k].hi + std::max(0.0, dt * (*rate)[k].hi);
      if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw ModelError(model.name + ": neighbourhood diverged");
      }
      inside = inside && neighbourhood[k].lo <= lo && hi <= neighbourhood[k].hi;
      candidate.push_back({lo, hi});
    }
    if (inside) return rate;

    // Plain Picard iteration settles in a few rounds for dynamics that are
    // affine in the box (the quadcopter); otherwise start over-widening.
    const double grow = iter < 2 ? 0.0 : 0.5 * (iter - 1);
    std::vector<Interval> next;
    next.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double lo = candidate[k].lo - grow * (cr[k].lo - candidate[k].lo);
      const double hi = candidate[k].hi + grow * (candidate[k].hi - cr[k].hi);
      next.push_back(hull(neighbourhood[k], Interval(lo, hi)));
    }
    neighbourhood = HyperRectangle(std::move(next));
  }
  return std::nullopt;
}

struct Sweep {
  std::vector<ReachSegment> segments;
  std::optional<HyperRectangle> hull;
  Safety safe = Safety::safe;
  bool completed = false;
};

Sweep run_sweep(const HyperRectangle& initial, std::span<const Interval> input, double horizon,
                double step, const std::optional<LinearConstraintSet>& unsafe,
                const ModelSpec& model, std::optional<Clock::time_point> deadline) {
  Sweep sw;
  HyperRectangle cr = initial;
  double remaining = horizon;
  while (remaining > 0.0) {
    FaceLiftStep s = single_face_lift(cr, step, remaining, input, model);
    if (unsafe && possibly_intersects(s.step_hull, *unsafe)) sw.safe = Safety::uncertain;
    sw.hull = sw.hull ? interval_hull(std::array{*sw.hull, s.step_hull}) : s.step_hull;
    sw.segments.push_back({horizon - remaining, horizon - s.new_remaining, std::move(s.step_hull)});
    cr = std::move(s.advanced);
    remaining = s.new_remaining;
    if (deadline && remaining > 0.0 && Clock::now() > *deadline) return sw;
  }
  sw.completed = true;
  return sw;
}

}  // namespace

const char* to_string(Safety s) { return s == Safety::safe ? "safe" : "uncertain"; }

void RuntimeBudget::validate() const {
  if (!(limit > 0.0)) throw InvalidInput("runtime budget must be positive");
  if (mode == BudgetMode::deterministic && (limit < 1.0 || std::floor(limit) != limit)) {
    throw InvalidInput("deterministic budget is a whole number of passes >= 1");
  }
}

const ReachSegment& ReachResult::segment_at(double offset) const {
  auto it = std::lower_bound(intermediates.begin(), intermediates.end(), offset,
                             [](const ReachSegment& s, double t) { return s.t_end < t; });
  if (it == intermediates.end()) return intermediates.back();
  return *it;
}

FaceLiftStep single_face_lift(const HyperRectangle& cr, double step, double remaining,
                              std::span<const Interval> input, const ModelSpec& model) {
  if (!(step > 0.0) || !(remaining > 0.0)) {
    throw InvalidInput("single_face_lift: step and remaining time must be positive");
  }
  if (cr.dim() != model.state_dim) throw InvalidInput("single_face_lift: box dimension mismatch");
  if (input.size() != model.input_dim) throw InvalidInput("single_face_lift: input dimension mismatch");

  // A step within rounding of the remainder finishes the sweep exactly.
  double dt = step >= remaining * (1.0 - 1e-9) ? remaining : step;
  std::optional<HyperRectangle> rate;
  while (true) {
    if (dt < kMinStep) {
      throw StepCollapse(model.name + ": face-lifting step fell below " + std::to_string(kMinStep) +
                         " s");
    }
    rate = validated_bounds(cr, dt, input, model);
    if (rate) break;
    dt *= 0.5;
  }

  std::vector<Interval> adv;
  adv.reserve(cr.dim());
  for (std::size_t k = 0; k < cr.dim(); ++k) {
    adv.emplace_back(cr[k].lo + dt * (*rate)[k].lo, cr[k].hi + dt * (*rate)[k].hi);
  }
  FaceLiftStep out{HyperRectangle(std::move(adv)), cr, 0.0, dt};
  // Between 0 and dt each face sits between its start and end position.
  out.step_hull = interval_hull(std::array{cr, out.advanced});
  out.new_remaining = dt == remaining ? 0.0 : remaining - dt;
  return out;
}

ReachResult reach_anytime(const HyperRectangle& initial, std::span<const Interval> input,
                          double t_rs, double horizon, double h0, const RuntimeBudget& budget,
                          const std::optional<LinearConstraintSet>& unsafe_local,
                          const ModelSpec& model) {
  if (!(horizon > 0.0) || !(h0 > 0.0)) throw InvalidInput("reach_anytime: T and h0 must be positive");
  budget.validate();
  if (initial.dim() != model.state_dim) throw InvalidInput("reach_anytime: initial set dimension mismatch");
  if (unsafe_local && unsafe_local->dim() != model.state_dim) {
    throw InvalidInput("reach_anytime: local unsafe set dimension mismatch");
  }

  const auto start = Clock::now();
  const bool wallclock = budget.mode == BudgetMode::wallclock;
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double, std::milli>(budget.limit));
  const int max_passes = wallclock ? kMaxRefinementPasses : static_cast<int>(budget.limit);

  std::optional<ReachResult> result;
  double step = h0;
  for (int pass = 0; pass < max_passes; ++pass) {
    std::optional<Clock::time_point> abort_at;
    if (wallclock && pass > 0) abort_at = deadline;
    Sweep sw = run_sweep(initial, input, horizon, step, unsafe_local, model, abort_at);
    if (!sw.completed) break;

    if (!result) {
      result.emplace(ReachResult{*sw.hull, {}, t_rs, horizon, sw.safe, 0, step, false, 0.0, {}});
    }
    result->hull = *sw.hull;
    result->intermediates = std::move(sw.segments);
    result->local_safe = sw.safe;
    result->passes_completed = pass + 1;
    result->final_step = step;
    result->pass_hulls.push_back(*sw.hull);

    if (wallclock && Clock::now() >= deadline) {
      if (pass == 0) result->budget_overrun = Clock::now() > deadline;
      break;
    }
    step *= 0.5;
  }
  result->elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return std::move(*result);
}

bool refine_monotone_check(const ReachResult& coarse, const ReachResult& fine) {
  if (coarse.horizon != fine.horizon) throw InvalidInput("refine_monotone_check: horizons differ");
  if (coarse.hull.dim() != fine.hull.dim()) throw InvalidInput("refine_monotone_check: dimensions differ");
  for (std::size_t k = 0; k < coarse.hull.dim(); ++k) {
    if (fine.hull[k].width() > coarse.hull[k].width() + 1e-9) return false;
  }
  return true;
}

}  // namespace reachguard
