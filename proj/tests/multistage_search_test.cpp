#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "test_support.hpp"
#include "uavlos/error.hpp"
#include "uavlos/harness.hpp"
#include "uavlos/multistage_search.hpp"
#include "uavlos/planar_search.hpp"
#include "uavlos/rng.hpp"

namespace uavlos {
namespace {

TEST(LambertW, KnownValues) {
  EXPECT_DOUBLE_EQ(lambert_w(0.0), 0.0);
  EXPECT_NEAR(lambert_w(std::numbers::e), 1.0, 1e-12);
  EXPECT_NEAR(lambert_w(1.0), 0.5671432904097838, 1e-12);
  for (double x : {0.01, 0.3, 2.0, 38.8, 1e4}) {
    const double w = lambert_w(x);
    EXPECT_NEAR(w * std::exp(w), x, 1e-9 * x);
  }
  EXPECT_THROW(lambert_w(-0.1), Error);
}

TEST(StageCount, Examples) {
  EXPECT_EQ(optimal_stage_count(140, 2.5), 4);
  EXPECT_EQ(optimal_stage_count(120, 3), 4);
  EXPECT_EQ(optimal_stage_count(10, 20), 1);
  EXPECT_EQ(optimal_stage_count(5, 5), 1);
}

TEST(GapBound, Examples) {
  EXPECT_NEAR(gap_bound(70, 3, 100, 60), 2.0 * 3.0 * std::sqrt(1300.0) / 100.0, 1e-12);
  EXPECT_NEAR(gap_bound(70, 3, 100, 60), 2.163, 1e-3);
  EXPECT_DOUBLE_EQ(gap_bound(60, 3, 100, 60), 0.0);
  EXPECT_NEAR(gap_bound(std::numbers::sqrt2 * 50.0, 1.0, 100, 0.0), std::numbers::sqrt2, 1e-12);
  try {
    gap_bound(50, 3, 100, 60);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

TEST(StagePlan, SpacingHalves) {
  const StagePlan plan{4, 3.0, 150.0};
  EXPECT_DOUBLE_EQ(plan.spacing(1), 24.0);
  EXPECT_DOUBLE_EQ(plan.spacing(2), 12.0);
  EXPECT_DOUBLE_EQ(plan.spacing(4), 3.0);
}

const Frame kFrame = build_frame({0, 0, 0}, {0, 100, 0});

TEST(Sweep, EmptyWorldFullWidth) {
  const Environment env({-300, -300, 300, 300}, 80, {});
  const SweepResult r = sweep_segment(env, kFrame, 100, {-50, 50}, {80, 2.0, 0.0});
  // Each user: one stripe per side of x = 0.
  ASSERT_EQ(r.stripes.size(), 4u);
  for (const LosStripe& s : r.stripes) {
    EXPECT_DOUBLE_EQ(s.height(), 100);
    EXPECT_GT(s.a.x * s.b.x, 0.0);
  }
  EXPECT_DOUBLE_EQ(r.stripes[0].x_lo(), -50);
  EXPECT_DOUBLE_EQ(r.stripes[1].x_hi(), 50);
  ASSERT_EQ(r.segments.size(), 1u);
  EXPECT_THROW(sweep_segment(env, kFrame, 0.0, {-50, 50}, {80, 2.0, 0.0}), Error);
}

TEST(Sweep, BelowMinimumAltitudeProjects) {
  const Environment env({-300, -300, 300, 300}, 80, {});
  const SweepResult r = sweep_segment(env, kFrame, 60, {-30, 30}, {80, 2.0, 0.0}, true, false);
  ASSERT_EQ(r.segments.size(), 1u);
  EXPECT_NEAR(r.segments[0].first.y, 50.0 / 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(r.segments[0].first.z, 80.0);
  EXPECT_NEAR(r.segments[0].first.x, -40.0, 1e-9);
  for (const LosStripe& s : r.stripes) {
    EXPECT_DOUBLE_EQ(s.height(), 60.0);
    EXPECT_DOUBLE_EQ(s.a.y, 0.0);
    EXPECT_EQ(s.user, User::kFirst);
  }
  EXPECT_NEAR(r.stripes.front().x_lo(), -30.0, 1e-9);
}

TEST(Sweep, PillarSplitsRunAtItsShadow) {
  const std::vector<testing::Box> boxes{{17, 20, 23, 26, 79}};
  const Environment env({-300, -300, 300, 300}, 80,
                        {testing::box(17, 20, 23, 26, 79)});
  const double step = 0.5;
  const SweepResult r = sweep_segment(env, kFrame, 85, {1, 60}, {80, step, 0.0}, true, false);
  ASSERT_EQ(r.stripes.size(), 2u);
  // Dense independent scan of the same lattice.
  std::vector<std::pair<double, double>> runs;
  bool in = false;
  for (double x = 1.0; x <= 60.0 + 1e-9; x += step) {
    const bool los = testing::slab_visible(kFrame.to_world({x, 0, 85}), kFrame.u1(), boxes);
    if (los && !in) runs.push_back({x, x});
    if (los) runs.back().second = x;
    in = los;
  }
  ASSERT_EQ(runs.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(r.stripes[k].x_lo(), runs[k].first, 1e-9);
    EXPECT_NEAR(r.stripes[k].x_hi(), runs[k].second, 1e-9);
  }
}

TEST(Multistage, EmptyWorldCollapses) {
  const Environment env({-300, -300, 300, 300}, 80, {});
  MultistageConfig cfg;
  cfg.delta = 2.0;
  cfg.stages = 3;
  cfg.h_min = 80;
  std::ostringstream diag;
  cfg.diagnostics = &diag;
  const MultistageResult r = run_multistage(env, kFrame, {0, 0, 150}, cfg);
  const double opt = std::sqrt(80.0 * 80.0 + 2500.0);
  EXPECT_LE(r.d0 - opt, 2.0 * 1.4 + 2.0);
  EXPECT_TRUE(env.double_los(r.best, kFrame));
  EXPECT_EQ(r.stages.size(), 3u);
  EXPECT_GT(r.search_length, 0.0);
  EXPECT_EQ(diag.str().substr(0, 6), "stage,");
}

TEST(Multistage, RejectsBadInput) {
  const Environment env({-300, -300, 300, 300}, 80, {testing::box(-20, 40, 20, 60, 79)});
  MultistageConfig cfg;
  cfg.h_min = 80;
  try {
    run_multistage(env, kFrame, {0, 0, 81}, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidStart);
  }
  cfg.delta = 0;
  EXPECT_THROW(run_multistage(env, kFrame, {0, 0, 300}, cfg), Error);
}

struct Case {
  testing::BoxWorld world;
  Frame frame;
  FramePoint p0;
};

std::vector<Case> random_cases(int n_seeds) {
  std::vector<Case> out;
  for (int seed = 1; seed <= n_seeds; ++seed) {
    testing::BoxWorld w = testing::random_box_world(seed, 60, 300.0, 20.0, 60.0);
    Rng rng(seed + 500);
    const WorldPoint u1{rng.uniform(80, 220), rng.uniform(80, 220), 0};
    const double phi = rng.uniform(0, 2 * std::numbers::pi);
    const double sep = rng.uniform(50, 120);
    const WorldPoint u2{u1.x + sep * std::cos(phi), u1.y + sep * std::sin(phi), 0};
    if (w.env.inside_any_footprint(xy(u1)) || w.env.inside_any_footprint(xy(u2))) continue;
    const Frame frame = build_frame(u1, u2);
    try {
      const FramePoint p0 = find_initial_double_los(w.env, frame, 0, 0, 5, 400);
      out.push_back({std::move(w), frame, p0});
    } catch (const Error&) {
    }
  }
  return out;
}

TEST(Multistage, CertifiedMonotoneAndPruningSafe) {
  for (const Case& c : random_cases(30)) {
    MultistageConfig cfg;
    cfg.delta = 3.0;
    cfg.stages = 4;
    cfg.h_min = c.world.env.h_min();
    const MultistageResult r = run_multistage(c.world.env, c.frame, c.p0, cfg);
    ASSERT_TRUE(c.world.env.double_los(r.best, c.frame));
    EXPECT_LE(r.d0, critical_distance(c.p0, c.frame) + 1e-9);
    for (std::size_t m = 1; m < r.stages.size(); ++m) {
      EXPECT_LE(r.stages[m].incumbent_d0, r.stages[m - 1].incumbent_d0);
    }
    // Stripe endpoints were LOS samples for their user.
    for (const StoredStripe& s : r.intervals) {
      const double h = s.stripe.height();
      for (const FramePoint& e : {s.stripe.a, s.stripe.b}) {
        if (std::abs(e.x) < 1e-5) continue;
        FramePoint q = e;
        if (h < cfg.h_min) {
          // Back on the lowest altitude plane along the ray from the user.
          const FramePoint u = c.frame.user(s.stripe.user);
          q = u + (e - u) * (cfg.h_min / h);
        }
        EXPECT_TRUE(testing::slab_visible(c.frame.to_world(q),
                                          s.stripe.user == User::kFirst ? c.frame.u1()
                                                                        : c.frame.u2(),
                                          c.world.boxes));
      }
    }
    MultistageConfig full = cfg;
    full.prune = false;
    const MultistageResult u = run_multistage(c.world.env, c.frame, c.p0, full);
    EXPECT_LE(r.d0 - u.d0, 2 * cfg.delta * 1.4 + 1e-9);
  }
}

TEST(Multistage, FindsOffPlaneOptimum) {
  // Worlds where the 3D grid oracle places the optimum clearly off the
  // middle perpendicular plane and beats the best planar result.
  const RelayLinkModel relay;
  const ValueFunction f = value_function(relay);
  int found = 0;
  for (const Case& c : random_cases(80)) {
    PlanarSearchConfig pc;
    pc.h_min = c.world.env.h_min();
    const PlanarSearchResult planar = run_planar_search(c.world.env, c.frame, c.p0, pc, f);
    ExhaustiveConfig ex;
    ex.altitude_cap = c.p0.z;
    const PlacementResult oracle = exhaustive_search(c.world.env, c.frame, relay, ex);
    if (!oracle.feasible) continue;
    const FramePoint q = c.frame.to_frame(oracle.position);
    if (std::abs(q.y) < 5.0 || critical_distance(q, c.frame) > planar.d0 - 5.0) continue;
    ++found;
    MultistageConfig cfg;
    cfg.h_min = c.world.env.h_min();
    const MultistageResult r = run_multistage(c.world.env, c.frame, c.p0, cfg);
    EXPECT_GT(std::abs(r.best.y), 1e-6);
    EXPECT_GT(f(r.d0), planar.value);
    EXPECT_TRUE(c.world.env.double_los(r.best, c.frame));
  }
  EXPECT_GE(found, 3);
}

TEST(Multistage, SweptLengthWithinBudget) {
  for (const Case& c : random_cases(30)) {
    MultistageConfig cfg;
    cfg.delta = 3.0;
    cfg.stages = 4;
    cfg.h_min = c.world.env.h_min();
    const MultistageResult r = run_multistage(c.world.env, c.frame, c.p0, cfg);
    const double h0 = c.p0.z;
    const double h = cfg.h_min;
    const double root = std::sqrt(h0 * h0 - h * h);
    const double budget = 2.0 * h0 * root / (8.0 * cfg.delta) + 2.0 * 3.0 * root;
    EXPECT_LE(r.swept_length, budget + 1e-5);
    EXPECT_NEAR(r.search_length, r.swept_length + r.connection_length, 1e-6);
  }
}

}  // namespace
}  // namespace uavlos
