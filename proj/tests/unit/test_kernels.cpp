#include <gtest/gtest.h>

#include <cmath>

#include "reachguard/kernels.hpp"
#include "support.hpp"

using namespace reachguard;
namespace ks = kernels::serial;
namespace kp = kernels::parallel;

namespace {

// Two planar agents on straight lines: a moves east along y = 0 and b moves
// west along y = 30, so their distance is known in closed form.
GroundTruth crossing_truth(std::size_t samples, double dt) {
  GroundTruth g;
  g.dt = dt;
  g.samples = samples;
  g.ids = {0, 1};
  g.dims = {4, 4};
  g.clock_offsets = {0.0, 0.0};
  g.states.assign(2, std::vector<double>(samples * 4));
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double a[4] = {10 * t, 10, 0, 0};
    const double b[4] = {100 - 10 * t, -10, 30, 0};
    std::copy(a, a + 4, g.states[0].begin() + static_cast<std::ptrdiff_t>(4 * k));
    std::copy(b, b + 4, g.states[1].begin() + static_cast<std::ptrdiff_t>(4 * k));
  }
  return g;
}

const std::array<std::size_t, 2> kAxes{0, 2};

}  // namespace

TEST(GroundTruth, SampleRangeIsInclusiveOnBothEnds) {
  const GroundTruth g = crossing_truth(1001, 0.01);
  auto [b, e] = g.sample_range(0.0, 1.0);
  EXPECT_EQ(b, 0u);
  EXPECT_EQ(e, 101u);
  std::tie(b, e) = g.sample_range(0.015, 0.035);
  EXPECT_EQ(b, 2u);
  EXPECT_EQ(e, 4u);
  std::tie(b, e) = g.sample_range(-5.0, 100.0);
  EXPECT_EQ(b, 0u);
  EXPECT_EQ(e, 1001u);
  std::tie(b, e) = g.sample_range(2.0, 1.0);
  EXPECT_EQ(b, e);
  std::tie(b, e) = g.sample_range(50.0, 60.0);
  EXPECT_EQ(b, e);
}

TEST(GroundTruth, PropertySampleRangeMatchesScan) {
  const GroundTruth g = crossing_truth(500, 0.001);
  support::Rng rng(61);
  for (int i = 0; i < 2000; ++i) {
    const double t0 = rng.uniform(-0.1, 0.6), t1 = t0 + rng.uniform(0, 0.3);
    std::size_t lo = g.samples, hi = 0;
    for (std::size_t k = 0; k < g.samples; ++k) {
      if (g.time(k) >= t0 && g.time(k) <= t1) {
        lo = std::min(lo, k);
        hi = k + 1;
      }
    }
    const auto [b, e] = g.sample_range(t0, t1);
    if (hi == 0) {
      EXPECT_EQ(b, e);
    } else {
      EXPECT_EQ(b, lo);
      EXPECT_EQ(e, hi);
    }
  }
}

TEST(GroundTruth, IndexOf) {
  const GroundTruth g = crossing_truth(10, 0.1);
  EXPECT_EQ(g.index_of(1), 1u);
  EXPECT_THROW(g.index_of(7), InvalidInput);
}

TEST(Rk4, MatchesQuadClosedForm) {
  const ModelSpec quad = quadcopter4d_model();
  Rk4 rk(quad);
  std::array<double, 4> x{1, 2, 3, -4};
  const std::array<double, 2> u{0.2, -0.1};
  rk.advance(x, u, 2.0, 1e-3);
  const auto exact = support::quad_closed_form(std::array<double, 4>{1, 2, 3, -4}, 0.2, -0.1, 2.0);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(x[k], exact[k], 1e-9);
}

TEST(Rk4, HarmonicEnergyConserved) {
  const ModelSpec h = harmonic2d_model();
  Rk4 rk(h);
  std::array<double, 2> x{1, 0};
  rk.advance(x, {}, 2.0, 1e-4);
  EXPECT_NEAR(x[0], std::cos(2.0), 1e-10);
  EXPECT_NEAR(x[1], -std::sin(2.0), 1e-10);
}

TEST(Kernels, MinPairwiseDistanceMatchesClosedForm) {
  const GroundTruth g = crossing_truth(1001, 0.01);  // paths cross in x at t = 5
  EXPECT_NEAR(ks::min_pairwise_distance(g, kAxes), 30.0, 1e-9);
  EXPECT_EQ(ks::min_pairwise_distance(g, kAxes), kp::min_pairwise_distance(g, kAxes));
}

TEST(Kernels, MinPairwiseDistanceSingleAgentIsInfinite) {
  GroundTruth g = crossing_truth(10, 0.1);
  g.ids.pop_back();
  g.dims.pop_back();
  g.states.pop_back();
  EXPECT_TRUE(std::isinf(ks::min_pairwise_distance(g, kAxes)));
  EXPECT_TRUE(std::isinf(kp::min_pairwise_distance(g, kAxes)));
}

TEST(Kernels, DistanceClaims) {
  const GroundTruth g = crossing_truth(1001, 0.01);
  // Distance is sqrt((100 - 20 t)^2 + 900); it drops below 50 for t in (3, 7).
  const std::vector<DistanceClaim> claims{{0, 1, 0.0, 2.9, 50.0},
                                          {0, 1, 0.0, 3.5, 50.0},
                                          {1, 0, 6.0, 8.0, 50.0},
                                          {0, 1, 7.5, 10.0, 50.0},
                                          {0, 1, 0.0, 10.0, 30.0}};
  EXPECT_EQ(ks::distance_violations(g, claims, kAxes), 2u);
  EXPECT_EQ(kp::distance_violations(g, claims, kAxes), 2u);
}

TEST(Kernels, RegionClaims) {
  const GroundTruth g = crossing_truth(1001, 0.01);
  // Forbidden: both x in [40, 60], true for t in [4, 6].
  auto row = [](std::size_t col, double sign, double bound) {
    std::vector<double> c(8, 0.0);
    c[col] = sign;
    return HalfSpace{c, bound};
  };
  const LinearConstraintSet unsafe({row(0, -1, -40), row(0, 1, 60), row(4, -1, -40), row(4, 1, 60)});
  const std::vector<RegionClaim> claims{{0.0, 3.9}, {3.0, 4.5}, {5.5, 9.0}, {6.1, 10.0}};
  EXPECT_EQ(ks::region_violations(g, claims, unsafe), 2u);
  EXPECT_EQ(kp::region_violations(g, claims, unsafe), 2u);
}

TEST(Kernels, ReachContainmentFlagsEscapes) {
  const GroundTruth g = crossing_truth(301, 0.01);
  const HyperRectangle good{{0, 20}, {10, 10}, {0, 0}, {0, 0}};
  const HyperRectangle tight{{0, 5}, {10, 10}, {0, 0}, {0, 0}};
  ReachRecord ok{0, 0.0, ReachResult{good, {{0.0, 2.0, good}}, 0.0, 2.0}};
  ReachRecord bad{0, 0.0, ReachResult{tight, {{0.0, 2.0, tight}}, 0.0, 2.0}};
  const std::vector<ReachRecord> records{ok, bad};
  const auto s = ks::reach_containment(g, records);
  const auto p = kp::reach_containment(g, records);
  EXPECT_EQ(s.checked, 2u * 201u);
  EXPECT_EQ(s.violations, 150u);  // x = 10 t exceeds 5 for t in (0.5, 2]
  EXPECT_NEAR(s.worst_excess, 15.0, 1e-9);
  EXPECT_EQ(s.checked, p.checked);
  EXPECT_EQ(s.violations, p.violations);
  EXPECT_EQ(s.worst_excess, p.worst_excess);
}

TEST(Kernels, PropertySerialEqualsParallelOnEnsembles) {
  support::Rng rng(62);
  const ModelSpec quad = quadcopter4d_model();
  for (int trial = 0; trial < 5; ++trial) {
    const HyperRectangle init = rng.box(4, -5, 5);
    const std::array<double, 2> u{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
    const auto r = reach_anytime(init, point_input(u), 0.0, 1.0, 0.1, RuntimeBudget::passes(2), {}, quad);
    std::vector<double> pts;
    for (int i = 0; i < 64; ++i) {
      const auto p = rng.point_in(init);
      pts.insert(pts.end(), p.begin(), p.end());
    }
    const auto s = ks::ensemble_containment(r, quad, pts, u, 1e-3);
    const auto p = kp::ensemble_containment(r, quad, pts, u, 1e-3);
    EXPECT_EQ(s.checked, p.checked);
    EXPECT_EQ(s.violations, 0u);
    EXPECT_EQ(p.violations, 0u);
    EXPECT_EQ(s.worst_excess, p.worst_excess);
  }
}
