#include <gtest/gtest.h>

#include "test_support.hpp"
#include "uavlos/city_gen.hpp"
#include "uavlos/error.hpp"
#include "uavlos/map_io.hpp"

namespace uavlos {
namespace {

TEST(CityGen, CoverageAndHeights) {
  for (double bcr : {0.1, 0.2, 0.3, 0.4}) {
    for (std::uint64_t seed : {1u, 7u, 42u}) {
      CityGenParams p;
      p.seed = seed;
      p.target_bcr = bcr;
      const Environment env = generate_city(p);
      EXPECT_NEAR(env.coverage_ratio(), bcr, 0.05) << bcr << " " << seed;
      double hmax = 0.0;
      for (const Building& b : env.buildings()) {
        EXPECT_GE(b.height(), 50.0);
        EXPECT_LE(b.height(), 80.0);
        hmax = std::max(hmax, b.height());
      }
      EXPECT_DOUBLE_EQ(env.h_min(), hmax);
      EXPECT_GT(env.floor_area_ratio(), env.coverage_ratio());
    }
  }
}

TEST(CityGen, SeedSevenExample) {
  CityGenParams p;
  p.seed = 7;
  p.target_bcr = 0.30;
  const Environment env = generate_city(p);
  EXPECT_GE(env.coverage_ratio(), 0.25);
  EXPECT_LE(env.coverage_ratio(), 0.35);
}

TEST(CityGen, Deterministic) {
  CityGenParams p;
  p.seed = 99;
  EXPECT_EQ(map_to_json_string(generate_city(p)), map_to_json_string(generate_city(p)));
}

TEST(CityGen, EmptyAndInfeasible) {
  CityGenParams p;
  p.target_bcr = 0.0;
  EXPECT_TRUE(generate_city(p).buildings().empty());
  p.target_bcr = 0.69;
  try {
    generate_city(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGenerationFailure);
  }
  p.target_bcr = 0.8;
  EXPECT_THROW(generate_city(p), Error);
  p.target_bcr = 0.3;
  p.height_lo = 90;
  EXPECT_THROW(generate_city(p), Error);
}

TEST(UserPairs, SamplingContract) {
  const Environment empty({0, 0, 500, 500}, 80, {});
  EXPECT_EQ(sample_user_pairs(empty, 3, 50, 150, 1).size(), 3u);
  EXPECT_TRUE(sample_user_pairs(empty, 0, 50, 150, 1).empty());

  const Environment env = testing::city(5, 0.4);
  const auto pairs = sample_user_pairs(env, 100, 50, 150, 3);
  ASSERT_EQ(pairs.size(), 100u);
  for (const UserPair& u : pairs) {
    EXPECT_FALSE(env.inside_any_footprint(xy(u.u1)));
    EXPECT_FALSE(env.inside_any_footprint(xy(u.u2)));
    // Independent point-in-polygon check by ray crossing.
    for (const Building& b : env.buildings()) {
      for (const WorldPoint& q : {u.u1, u.u2}) {
        bool inside = false;
        const auto fp = b.footprint();
        for (std::size_t i = 0, j = fp.size() - 1; i < fp.size(); j = i++) {
          if ((fp[i].y > q.y) != (fp[j].y > q.y) &&
              q.x < (fp[j].x - fp[i].x) * (q.y - fp[i].y) / (fp[j].y - fp[i].y) + fp[i].x) {
            inside = !inside;
          }
        }
        EXPECT_FALSE(inside);
      }
    }
    const double sep = distance(u.u1, u.u2);
    EXPECT_GE(sep, 50.0 - 1e-9);
    EXPECT_LE(sep, 150.0 + 1e-9);
    EXPECT_EQ(u.u1.z, 0.0);
  }
  const auto again = sample_user_pairs(env, 100, 50, 150, 3);
  EXPECT_EQ(again.front().u1, pairs.front().u1);
  EXPECT_EQ(again.back().u2, pairs.back().u2);
}

TEST(UserPairs, BudgetExhaustion) {
  const Environment tiny({0, 0, 10, 10}, 80, {});
  try {
    sample_user_pairs(tiny, 5, 100, 200, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSamplingFailure);
  }
}

}  // namespace
}  // namespace uavlos
