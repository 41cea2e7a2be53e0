#include "reachguard/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace reachguard {

std::size_t GroundTruth::index_of(AgentId id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw InvalidInput("ground truth has no agent " + std::to_string(id));
  return static_cast<std::size_t>(it - ids.begin());
}

std::pair<std::size_t, std::size_t> GroundTruth::sample_range(double t0, double t1) const {
  if (!(t1 >= t0) || samples == 0) return {0, 0};
  const double last = static_cast<double>(samples - 1);
  double b = std::clamp(std::ceil(t0 / dt), 0.0, last + 1.0);
  while (b > 0.0 && time(static_cast<std::size_t>(b) - 1) >= t0) b -= 1.0;
  while (b <= last && time(static_cast<std::size_t>(b)) < t0) b += 1.0;
  double e = std::clamp(std::floor(t1 / dt) + 1.0, 0.0, last + 1.0);
  while (e <= last && time(static_cast<std::size_t>(e)) <= t1) e += 1.0;
  while (e > 0.0 && time(static_cast<std::size_t>(e) - 1) > t1) e -= 1.0;
  const auto bi = static_cast<std::size_t>(b);
  const auto ei = static_cast<std::size_t>(e);
  return {bi, std::max(bi, ei)};
}

Rk4::Rk4(const ModelSpec& model)
    : model_(&model),
      k1_(model.state_dim),
      k2_(model.state_dim),
      k3_(model.state_dim),
      k4_(model.state_dim),
      tmp_(model.state_dim) {}

void Rk4::step(std::span<double> x, std::span<const double> u, double dt) {
  const std::size_t n = x.size();
  const auto& f = model_->deriv;
  f(x, u, k1_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * dt * k1_[i];
  f(tmp_, u, k2_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * dt * k2_[i];
  f(tmp_, u, k3_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k3_[i];
  f(tmp_, u, k4_);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
}

void Rk4::advance(std::span<double> x, std::span<const double> u, double duration, double max_dt) {
  if (!(duration > 0.0)) return;
  const auto steps = static_cast<std::size_t>(std::ceil(duration / max_dt - 1e-9));
  const double h = duration / static_cast<double>(std::max<std::size_t>(steps, 1));
  for (std::size_t s = 0; s < std::max<std::size_t>(steps, 1); ++s) step(x, u, h);
}

namespace {

// Largest amount by which x leaves the box, and whether that breaks the
// tolerance.
std::pair<double, bool> excess(const HyperRectangle& box, std::span<const double> x) {
  double worst = 0.0;
  bool outside = false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const Interval& iv = box[k];
    const double below = iv.lo - x[k];
    const double above = x[k] - iv.hi;
    worst = std::max({worst, below, above});
    if (below > kContainmentTolerance * (1.0 + std::abs(iv.lo)) ||
        above > kContainmentTolerance * (1.0 + std::abs(iv.hi))) {
      outside = true;
    }
  }
  return {worst, outside};
}

void check_trajectory(const ReachResult& reach, Rk4& rk, std::span<double> x,
                      std::span<const double> u, double dt, ContainmentStats& st) {
  const double horizon = reach.horizon;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  double t = 0.0;
  for (std::size_t k = 0;; ++k) {
    const auto [worst, outside] = excess(reach.segment_at(t).box, x);
    ++st.checked;
    if (outside) ++st.violations;
    st.worst_excess = std::max(st.worst_excess, worst);
    if (k == steps) break;
    const double next = k + 1 == steps ? horizon : static_cast<double>(k + 1) * dt;
    rk.step(x, u, next - t);
    t = next;
  }
}

void check_record(const GroundTruth& truth, const ReachRecord& rec, ContainmentStats& st) {
  const std::size_t a = truth.index_of(rec.agent);
  const double g = rec.global_start;
  const auto [b, e] = truth.sample_range(g, g + rec.result.horizon);
  for (std::size_t k = b; k < e; ++k) {
    const double offset = std::clamp(truth.time(k) - g, 0.0, rec.result.horizon);
    const auto [worst, outside] = excess(rec.result.segment_at(offset).box, truth.state(a, k));
    ++st.checked;
    if (outside) ++st.violations;
    st.worst_excess = std::max(st.worst_excess, worst);
  }
}

double planar_distance(std::span<const double> p, std::span<const double> q,
                       std::span<const std::size_t> axes) {
  double s = 0.0;
  for (std::size_t ax : axes) {
    const double d = p[ax] - q[ax];
    s += d * d;
  }
  return std::sqrt(s);
}

bool claim_broken(const GroundTruth& truth, const DistanceClaim& c,
                  std::span<const std::size_t> axes) {
  const std::size_t a = truth.index_of(c.a);
  const std::size_t b = truth.index_of(c.b);
  const auto [lo, hi] = truth.sample_range(c.t0, c.t1);
  for (std::size_t k = lo; k < hi; ++k) {
    if (planar_distance(truth.state(a, k), truth.state(b, k), axes) < c.bound) return true;
  }
  return false;
}

bool region_broken(const GroundTruth& truth, const RegionClaim& c,
                   const LinearConstraintSet& unsafe, std::vector<double>& joint) {
  const auto [lo, hi] = truth.sample_range(c.t0, c.t1);
  for (std::size_t k = lo; k < hi; ++k) {
    joint.clear();
    for (std::size_t a = 0; a < truth.ids.size(); ++a) {
      const auto s = truth.state(a, k);
      joint.insert(joint.end(), s.begin(), s.end());
    }
    if (unsafe.satisfied_by(joint)) return true;
  }
  return false;
}

double min_distance_at(const GroundTruth& truth, std::size_t k, std::span<const std::size_t> axes) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < truth.ids.size(); ++a) {
    for (std::size_t b = a + 1; b < truth.ids.size(); ++b) {
      best = std::min(best, planar_distance(truth.state(a, k), truth.state(b, k), axes));
    }
  }
  return best;
}

void check_points(std::span<const double> points, std::size_t n) {
  if (n == 0 || points.size() % n != 0) {
    throw InvalidInput("ensemble_containment: point buffer is not a whole number of states");
  }
}

}  // namespace

namespace kernels::serial {

ContainmentStats ensemble_containment(const ReachResult& reach, const ModelSpec& model,
                                      std::span<const double> initial_points,
                                      std::span<const double> u, double dt) {
  const std::size_t n = model.state_dim;
  check_points(initial_points, n);
  ContainmentStats st;
  Rk4 rk(model);
  std::vector<double> x(n);
  for (std::size_t p = 0; p < initial_points.size() / n; ++p) {
    std::copy_n(initial_points.begin() + static_cast<std::ptrdiff_t>(p * n), n, x.begin());
    check_trajectory(reach, rk, x, u, dt, st);
  }
  return st;
}

ContainmentStats reach_containment(const GroundTruth& truth, std::span<const ReachRecord> records) {
  ContainmentStats st;
  for (const auto& r : records) check_record(truth, r, st);
  return st;
}

std::size_t distance_violations(const GroundTruth& truth, std::span<const DistanceClaim> claims,
                                std::span<const std::size_t> position_axes) {
  std::size_t bad = 0;
  for (const auto& c : claims) bad += claim_broken(truth, c, position_axes) ? 1 : 0;
  return bad;
}

std::size_t region_violations(const GroundTruth& truth, std::span<const RegionClaim> claims,
                              const LinearConstraintSet& unsafe) {
  std::size_t bad = 0;
  std::vector<double> joint;
  for (const auto& c : claims) bad += region_broken(truth, c, unsafe, joint) ? 1 : 0;
  return bad;
}

double min_pairwise_distance(const GroundTruth& truth, std::span<const std::size_t> position_axes) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < truth.samples; ++k) {
    best = std::min(best, min_distance_at(truth, k, position_axes));
  }
  return best;
}

}  // namespace kernels::serial

namespace kernels::parallel {

ContainmentStats ensemble_containment(const ReachResult& reach, const ModelSpec& model,
                                      std::span<const double> initial_points,
                                      std::span<const double> u, double dt) {
  const std::size_t n = model.state_dim;
  check_points(initial_points, n);
  const auto count = static_cast<std::ptrdiff_t>(initial_points.size() / n);
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst = 0.0;
#pragma omp parallel reduction(+ : checked, violations) reduction(max : worst)
  {
    Rk4 rk(model);
    std::vector<double> x(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t p = 0; p < count; ++p) {
      std::copy_n(initial_points.begin() + p * static_cast<std::ptrdiff_t>(n), n, x.begin());
      ContainmentStats st;
      check_trajectory(reach, rk, x, u, dt, st);
      checked += st.checked;
      violations += st.violations;
      worst = std::max(worst, st.worst_excess);
    }
  }
  return {checked, violations, worst};
}

ContainmentStats reach_containment(const GroundTruth& truth, std::span<const ReachRecord> records) {
  const auto count = static_cast<std::ptrdiff_t>(records.size());
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : checked, violations) \
    reduction(max : worst)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    ContainmentStats st;
    check_record(truth, records[static_cast<std::size_t>(r)], st);
    checked += st.checked;
    violations += st.violations;
    worst = std::max(worst, st.worst_excess);
  }
  return {checked, violations, worst};
}

std::size_t distance_violations(const GroundTruth& truth, std::span<const DistanceClaim> claims,
                                std::span<const std::size_t> position_axes) {
  const auto count = static_cast<std::ptrdiff_t>(claims.size());
  std::size_t bad = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : bad)
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    bad += claim_broken(truth, claims[static_cast<std::size_t>(c)], position_axes) ? 1 : 0;
  }
  return bad;
}

std::size_t region_violations(const GroundTruth& truth, std::span<const RegionClaim> claims,
                              const LinearConstraintSet& unsafe) {
  const auto count = static_cast<std::ptrdiff_t>(claims.size());
  std::size_t bad = 0;
#pragma omp parallel reduction(+ : bad)
  {
    std::vector<double> joint;
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      bad += region_broken(truth, claims[static_cast<std::size_t>(c)], unsafe, joint) ? 1 : 0;
    }
  }
  return bad;
}

double min_pairwise_distance(const GroundTruth& truth, std::span<const std::size_t> position_axes) {
  const auto count = static_cast<std::ptrdiff_t>(truth.samples);
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : best)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    best = std::min(best, min_distance_at(truth, static_cast<std::size_t>(k), position_axes));
  }
  return best;
}

}  // namespace kernels::parallel

}  // namespace reachguard
