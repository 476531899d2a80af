#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "uavlos/environment.hpp"
#include "uavlos/error.hpp"
#include "uavlos/map_io.hpp"
#include "uavlos/rng.hpp"

namespace uavlos {
namespace {

using testing::box;
using testing::Box;

Environment single_box(double h_min = 60.0) {
  return Environment({-20, -20, 20, 20}, h_min, {box(4, -1, 6, 1, 50)});
}

TEST(Building, ValidatesFootprint) {
  EXPECT_THROW(Building({{0, 0}, {1, 0}}, 10), Error);
  EXPECT_THROW(Building({{0, 0}, {1, 0}, {2, 0}}, 10), Error);
  EXPECT_THROW(box(0, 0, 1, 1, 0.0), Error);
  // Bow tie.
  EXPECT_THROW(Building({{0, 0}, {2, 2}, {2, 0}, {0, 2}}, 10), Error);
  // Clockwise input is accepted and normalized.
  const Building cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, 5);
  EXPECT_NEAR(cw.area(), 1.0, 1e-12);
}

TEST(Environment, ValidatesInvariants) {
  try {
    Environment({0, 0, 10, 10}, 40, {box(1, 1, 2, 2, 50)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidMap);
  }
  EXPECT_THROW(Environment({0, 0, 10, 10}, 60, {box(8, 8, 12, 9, 50)}), Error);
}

TEST(Los, Examples) {
  const Environment empty({-20, -20, 20, 20}, 0, {});
  EXPECT_TRUE(empty.los_visible({0, 0, 0}, {10, 10, 100}));
  const Environment env = single_box();
  EXPECT_FALSE(env.los_visible({0, 0, 0}, {10, 0, 40}));
  EXPECT_TRUE(env.los_visible({0, 0, 0}, {10, 0, 200}));
  EXPECT_FALSE(env.los_visible({10, 0, 40}, {0, 0, 0}));
}

TEST(Los, GrazingCountsAsVisible) {
  const Environment env = single_box();
  // Along the roof plane.
  EXPECT_TRUE(env.los_visible({0, 0, 50}, {10, 0, 50}));
  // Along a wall.
  EXPECT_TRUE(env.los_visible({4, -5, 10}, {4, 5, 10}));
  // Touching the roof edge from below the roof line on one side.
  EXPECT_TRUE(env.los_visible({0, 0, 30}, {4, 0, 50}));
  // Vertical segment inside the footprint.
  EXPECT_FALSE(env.los_visible({5, 0, 10}, {5, 0, 60}));
  EXPECT_TRUE(env.los_visible({5, 0, 50}, {5, 0, 60}));
}

TEST(Los, MatchesSlabOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const testing::BoxWorld w = testing::random_box_world(seed, 30);
    Rng rng(seed * 101);
    for (int i = 0; i < 2000; ++i) {
      const WorldPoint a{rng.uniform(-20, 320), rng.uniform(-20, 320), rng.uniform(0, 80)};
      const WorldPoint b{rng.uniform(-20, 320), rng.uniform(-20, 320), rng.uniform(0, 80)};
      const bool oracle = testing::slab_visible(a, b, w.boxes);
      ASSERT_EQ(w.env.los_visible(a, b), oracle) << "seed " << seed << " sample " << i;
      ASSERT_EQ(w.env.los_visible(b, a), oracle);
      ASSERT_EQ(w.env.los_visible_naive(a, b), oracle);
    }
  }
}

TEST(Los, IndexMatchesNaiveOnGeneratedCities) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Environment env = testing::city(seed, 0.35);
    Rng rng(seed);
    for (int i = 0; i < 5000; ++i) {
      const WorldPoint a{rng.uniform(0, 500), rng.uniform(0, 500), 0.0};
      const WorldPoint b{rng.uniform(0, 500), rng.uniform(0, 500), rng.uniform(0, 150)};
      ASSERT_EQ(env.los_visible(a, b), env.los_visible_naive(a, b));
    }
  }
}

TEST(Los, UpwardAndColinearInvariance) {
  const Environment env = testing::city(3, 0.3);
  Rng rng(77);
  int upward_checked = 0;
  int colinear_checked = 0;
  for (int i = 0; i < 20000; ++i) {
    const WorldPoint u{rng.uniform(0, 500), rng.uniform(0, 500), 0.0};
    if (env.inside_any_footprint(xy(u))) continue;
    const WorldPoint p{u.x + rng.uniform(-150, 150), u.y + rng.uniform(-150, 150),
                       rng.uniform(0, 150)};
    if (env.los_visible(u, p)) {
      const WorldPoint up{p.x, p.y, p.z + rng.uniform(0, 200)};
      ASSERT_TRUE(env.los_visible(u, up));
      ++upward_checked;
      if (p.z >= env.h_min()) {
        const WorldPoint far = u + (p - u) * rng.uniform(1.0, 4.0);
        ASSERT_TRUE(env.los_visible(u, far));
        ++colinear_checked;
      }
    }
  }
  EXPECT_GT(upward_checked, 500);
  EXPECT_GT(colinear_checked, 100);
}

TEST(DoubleLos, PermissibilityAndExamples) {
  const Environment empty({-200, -200, 200, 200}, 80, {});
  EXPECT_TRUE(empty.double_los(WorldPoint{0, 0, 100}, {10, 10, 0}, {-30, 5, 0}));
  try {
    empty.double_los(WorldPoint{0, 0, 50}, {10, 10, 0}, {-30, 5, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPermissible);
  }
  // User 1 walled in at short range: a far, low point is blocked.
  const std::vector<Box> walls{{-3, -3, 3, -2, 79}, {-3, 2, 3, 3, 79}, {-3, -2, -2, 2, 79},
                               {2, -2, 3, 2, 79}};
  std::vector<Building> bs;
  for (const Box& w : walls) bs.push_back(box(w.x0, w.y0, w.x1, w.y1, w.h));
  const Environment boxed({-200, -200, 200, 200}, 80, bs);
  const WorldPoint u1{0, 0, 0};
  const WorldPoint u2{100, 0, 0};
  const WorldPoint p{150, 0, 80};
  EXPECT_FALSE(boxed.double_los(p, u1, u2));
  EXPECT_EQ(boxed.double_los(p, u1, u2),
            testing::slab_visible(p, u1, walls) && testing::slab_visible(p, u2, walls));
}

TEST(FindInitial, EmptyWorld) {
  const Environment empty({-200, -200, 200, 200}, 80, {});
  const Frame f = build_frame({0, 0, 0}, {0, 100, 0});
  const FramePoint p = find_initial_double_los(empty, f, 0, 0, 5);
  EXPECT_EQ(p, (FramePoint{0, 0, 80}));
}

TEST(FindInitial, WallBesideUserMatchesScan) {
  const Box wall{-20, 3, 20, 5, 79};
  const Environment env({-200, -200, 200, 200}, 80, {box(wall.x0, wall.y0, wall.x1, wall.y1, wall.h)});
  const Frame f = build_frame({0, 0, 0}, {0, 100, 0});
  const FramePoint p = find_initial_double_los(env, f, 0, 0, 5, 2500);
  double expected = -1;
  for (int k = 0; k < 400; ++k) {
    const WorldPoint q{0, 50, 80.0 + 5.0 * k};
    if (testing::slab_visible(q, f.u1(), {wall}) && testing::slab_visible(q, f.u2(), {wall})) {
      expected = q.z;
      break;
    }
  }
  ASSERT_GT(expected, 80.0);
  EXPECT_DOUBLE_EQ(p.z, expected);
}

TEST(FindInitial, SealedUser) {
  std::vector<Building> bs{box(-3, -3, 3, -1, 79.9), box(-3, 1, 3, 3, 79.9),
                           box(-3, -1, -1, 1, 79.9), box(1, -1, 3, 1, 79.9)};
  const Environment env({-200, -200, 200, 200}, 80, bs);
  const Frame f = build_frame({0, 0, 0}, {100, 0, 0});
  try {
    find_initial_double_los(env, f, 0, 0, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoInitialPoint);
  }
}

TEST(MapIo, RoundTrip) {
  const Environment env = testing::city(4, 0.25);
  const Environment back = map_from_json_string(map_to_json_string(env));
  ASSERT_EQ(back.buildings().size(), env.buildings().size());
  EXPECT_EQ(back.bounds(), env.bounds());
  EXPECT_DOUBLE_EQ(back.h_min(), env.h_min());
  for (std::size_t i = 0; i < env.buildings().size(); ++i) {
    EXPECT_DOUBLE_EQ(back.buildings()[i].height(), env.buildings()[i].height());
    EXPECT_DOUBLE_EQ(back.buildings()[i].area(), env.buildings()[i].area());
  }
}

TEST(MapIo, RejectsMalformed) {
  auto code_of = [](const std::string& text) {
    try {
      map_from_json_string(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code_of("{"), ErrorCode::kInvalidMap);
  EXPECT_EQ(code_of(R"({"bounds":[0,0,10],"h_min":5,"buildings":[]})"), ErrorCode::kInvalidMap);
  EXPECT_EQ(code_of(R"({"bounds":[0,0,10,10],"h_min":5,"buildings":[{"footprint":[[1,1],[2,1],[2,2]],"height":9}]})"),
            ErrorCode::kInvalidMap);
  EXPECT_THROW(load_map("/nonexistent/map.json"), Error);
}

}  // namespace
}  // namespace uavlos
