#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "uavlos/error.hpp"
#include "uavlos/harness.hpp"

namespace uavlos {
namespace {

const Rect kBounds{0, 0, 300, 400};

// Each user stands in a closed 24 m courtyard with 100 m walls, so low
// points far from either user see neither.
Environment courtyard_map() {
  std::vector<Building> b;
  for (double cy : {150.0, 250.0}) {
    const double cx = 100.0;
    b.push_back(testing::box(cx - 12, cy - 12, cx + 12, cy - 10, 100));
    b.push_back(testing::box(cx - 12, cy + 10, cx + 12, cy + 12, 100));
    b.push_back(testing::box(cx - 12, cy - 10, cx - 10, cy + 10, 100));
    b.push_back(testing::box(cx + 10, cy - 10, cx + 12, cy + 10, 100));
  }
  return Environment(kBounds, 100, std::move(b));
}

const Frame kFrame = build_frame({100, 150, 0}, {100, 250, 0});

TEST(SchemeNames, RoundTrip) {
  for (const char* n : {"alg1", "alg2", "ex3d", "ex2dh", "ex2dv", "stat"}) {
    EXPECT_EQ(to_string(scheme_from_string(n)), n);
  }
  EXPECT_THROW(scheme_from_string("bogus"), Error);
}

TEST(Exhaustive, EmptyWorldPicksPointAboveMidpoint) {
  const Environment env(kBounds, 80, {});
  ExhaustiveConfig cfg;
  cfg.altitude_cap = 120;
  const PlacementResult r = exhaustive_search(env, kFrame, RelayLinkModel{}, cfg);
  ASSERT_TRUE(r.feasible);
  EXPECT_DOUBLE_EQ(r.position.x, 100);
  EXPECT_DOUBLE_EQ(r.position.y, 200);
  EXPECT_DOUBLE_EQ(r.position.z, 80);
  // 61 x 81 x 9 points scanned once.
  EXPECT_DOUBLE_EQ(r.search_length, (61.0 * 81 * 9 - 1) * 5);
  cfg.altitude_cap = 50;
  EXPECT_THROW(exhaustive_search(env, kFrame, RelayLinkModel{}, cfg), Error);
  cfg.grid_step = 0;
  EXPECT_THROW(exhaustive_search(env, kFrame, RelayLinkModel{}, cfg), Error);
}

TEST(Exhaustive, HorizontalPlaneBlockedInCourtyards) {
  const Environment env = courtyard_map();
  ExhaustiveConfig cfg;
  cfg.mode = ExhaustiveMode::k2dHorizontal;
  cfg.h2d = 120;
  const PlacementResult r = exhaustive_search(env, kFrame, RelayLinkModel{}, cfg);
  EXPECT_FALSE(r.feasible);
  EXPECT_TRUE(std::isnan(r.position.x));
  EXPECT_GT(r.search_length, 0.0);
  cfg.h2d = 90;
  EXPECT_THROW(exhaustive_search(env, kFrame, RelayLinkModel{}, cfg), Error);
}

TEST(Exhaustive, VerticalNeverBeatsFullGrid) {
  const Environment env = testing::city(7, 0.3, 50, 80);
  const std::vector<UserPair> pairs = sample_user_pairs(env, 6, 50, 150, 3);
  for (const UserPair& up : pairs) {
    const Frame frame = build_frame(up.u1, up.u2);
    ExhaustiveConfig cfg;
    cfg.altitude_cap = env.h_min() + 60;
    const PlacementResult full = exhaustive_search(env, frame, RelayLinkModel{}, cfg);
    cfg.mode = ExhaustiveMode::k2dVertical;
    const PlacementResult plane = exhaustive_search(env, frame, RelayLinkModel{}, cfg);
    if (plane.feasible) {
      ASSERT_TRUE(full.feasible);
      EXPECT_LE(plane.objective, full.objective * (1 + 1e-12));
      EXPECT_TRUE(env.double_los(frame.to_frame(plane.position), frame));
      EXPECT_NEAR(frame.to_frame(plane.position).y, 0.0, 1e-9);
    }
    if (full.feasible) EXPECT_TRUE(env.double_los(frame.to_frame(full.position), frame));
  }
}

TEST(Statistical, DistanceOnlyRankingPicksClosestGridPoint) {
  const Environment env(kBounds, 80, {});
  const StatLosParams p{5.0, 0.0};
  const PlacementResult s = statistical_baseline(env, kFrame, RelayLinkModel{}, RelayLinkModel{},
                                                 p, 5, 120);
  ExhaustiveConfig cfg;
  cfg.altitude_cap = 120;
  const PlacementResult e = exhaustive_search(env, kFrame, RelayLinkModel{}, cfg);
  EXPECT_TRUE(s.feasible);
  EXPECT_DOUBLE_EQ(s.position.x, e.position.x);
  EXPECT_DOUBLE_EQ(s.position.y, e.position.y);
  EXPECT_DOUBLE_EQ(s.position.z, e.position.z);
  EXPECT_DOUBLE_EQ(s.objective, e.objective);
  EXPECT_DOUBLE_EQ(s.search_length, 0.0);
}

TEST(Statistical, EmptyWorldMatchesExhaustiveWithFittedParams) {
  const Environment env(kBounds, 80, {});
  const StatFitResult fit = fit_statistical_params(env, 2000, 1);
  const PlacementResult s = statistical_baseline(env, kFrame, RelayLinkModel{}, RelayLinkModel{},
                                                 fit.params, 5, 120);
  ExhaustiveConfig cfg;
  cfg.altitude_cap = 120;
  const PlacementResult e = exhaustive_search(env, kFrame, RelayLinkModel{}, cfg);
  EXPECT_DOUBLE_EQ(s.objective, e.objective);
}

TEST(Statistical, NoGuaranteeInCourtyards) {
  const Environment env = courtyard_map();
  const std::optional<FramePoint> p0 = find_initial_double_los(env, kFrame, 0, 0, 5, 1000);
  ASSERT_TRUE(p0.has_value());
  Scheme stat;
  stat.kind = SchemeKind::kStatistical;
  stat.stat_params = StatLosParams{5.0, 0.0};
  const PlacementResult s = run_scheme(env, kFrame, RelayLinkModel{}, stat, p0, 0);
  EXPECT_FALSE(s.feasible);
  // A blocked relay link is valued under the NLOS path loss.
  EXPECT_GT(s.objective, 0.0);
  Scheme a1;
  const PlacementResult r1 = run_scheme(env, kFrame, RelayLinkModel{}, a1, p0, 0);
  EXPECT_TRUE(r1.feasible);
  EXPECT_TRUE(env.double_los(kFrame.to_frame(r1.position), kFrame));
  EXPECT_LT(s.objective, r1.objective);
}

TEST(RunScheme, NoInitialPointIsInfeasible) {
  const Environment env = courtyard_map();
  for (SchemeKind k : {SchemeKind::kAlg1, SchemeKind::kAlg2}) {
    Scheme s;
    s.kind = k;
    const PlacementResult r = run_scheme(env, kFrame, RelayLinkModel{}, s, std::nullopt, 4);
    EXPECT_FALSE(r.feasible);
    EXPECT_EQ(r.pair_id, 4u);
    EXPECT_EQ(r.scheme, k);
  }
  Scheme bad;
  bad.step = -1;
  EXPECT_THROW(run_scheme(env, kFrame, RelayLinkModel{}, bad, std::nullopt, 0), Error);
}

ScenarioConfig small_scenario() {
  CityGenParams g;
  g.seed = 11;
  g.bounds = {0, 0, 200, 200};
  g.target_bcr = 0.2;
  ScenarioConfig cfg;
  cfg.map = g;
  cfg.pairs = {2, 50, 100, 5};
  Scheme a;
  a.kind = SchemeKind::kAlg1;
  Scheme b;
  b.kind = SchemeKind::kExhaustive2dV;
  cfg.schemes = {b, a};
  cfg.threads = 2;
  return cfg;
}

TEST(Experiment, RowCountOrderAndDeterminism) {
  const ScenarioConfig cfg = small_scenario();
  const std::vector<ExperimentRow> rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].pair_id, 0u);
  EXPECT_EQ(rows[0].result.scheme, SchemeKind::kAlg1);
  EXPECT_EQ(rows[1].result.scheme, SchemeKind::kExhaustive2dV);
  EXPECT_EQ(rows[3].pair_id, 1u);
  for (const ExperimentRow& r : rows) {
    EXPECT_GE(r.separation, 50.0);
    EXPECT_LE(r.separation, 100.0);
    EXPECT_GE(r.result.search_length, 0.0);
  }
  std::ostringstream a, b;
  write_results_csv(rows, a);
  ScenarioConfig again = cfg;
  again.threads = 1;
  write_results_csv(run_experiment(again), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "pair_id,u1x,u1y,u2x,u2y,L,scheme,px,py,pz,feasible,objective,search_length_m");
}

ExperimentRow row(std::size_t id, SchemeKind k, double sep, double obj, double len) {
  ExperimentRow r;
  r.pair_id = id;
  r.separation = sep;
  r.result.scheme = k;
  r.result.objective = obj;
  r.result.search_length = len;
  r.result.feasible = true;
  return r;
}

TEST(Summary, RatiosAndBuckets) {
  const std::vector<ExperimentRow> rows{
      row(0, SchemeKind::kAlg1, 60, 2.0, 10), row(0, SchemeKind::kExhaustive3d, 60, 4.0, 100),
      row(1, SchemeKind::kAlg1, 120, 4.0, 30), row(1, SchemeKind::kExhaustive3d, 120, 4.0, 100)};
  const std::vector<SummaryRow> self = summarize(rows, SchemeKind::kAlg1);
  EXPECT_DOUBLE_EQ(self.front().ratio_to_reference, 1.0);
  const std::vector<SummaryRow> s = summarize(rows, SchemeKind::kExhaustive3d, {50, 100, 150});
  // Overall plus two buckets for each scheme.
  ASSERT_EQ(s.size(), 6u);
  std::size_t alg1_rows = 0;
  for (const SummaryRow& r : s) {
    if (r.scheme != SchemeKind::kAlg1) continue;
    ++alg1_rows;
    if (std::isnan(r.bucket_lo)) {
      EXPECT_DOUBLE_EQ(r.mean_objective, 3.0);
      EXPECT_DOUBLE_EQ(r.median_objective, 3.0);
      EXPECT_DOUBLE_EQ(r.ratio_to_reference, 0.75);
      EXPECT_DOUBLE_EQ(r.mean_search_length, 20.0);
      EXPECT_DOUBLE_EQ(r.feasibility_rate, 1.0);
    } else if (r.bucket_lo == 50) {
      EXPECT_DOUBLE_EQ(r.ratio_to_reference, 0.5);
      EXPECT_EQ(r.count, 1u);
    }
  }
  EXPECT_EQ(alg1_rows, 3u);
  EXPECT_THROW(summarize(rows, SchemeKind::kAlg2), Error);
  std::ostringstream out;
  write_summary_csv(s, out);
  EXPECT_NE(out.str().find("alg1"), std::string::npos);
}

TEST(Scenario, ParsesAllSections) {
  const std::string text = R"({
    "map": {"seed": 4, "bcr": 0.25, "bounds": [0, 0, 250, 300], "height_lo": 40, "height_hi": 70},
    "pairs": {"n": 7, "min_sep": 60, "max_sep": 90, "seed": 9},
    "link": {"wpt": {"eta": 0.5, "P_dbm": 40, "beta_db": -30, "alpha": 2.5}},
    "schemes": ["alg1", {"kind": "alg2", "delta": 2, "stages": 3},
                {"kind": "stat", "a": 9.6, "b": 0.16}],
    "output": {"results": "out/r.csv", "summary": "out/s.csv"},
    "threads": 3
  })";
  const ScenarioConfig c = parse_scenario(text, "/base");
  const auto& g = std::get<CityGenParams>(c.map);
  EXPECT_EQ(g.seed, 4u);
  EXPECT_DOUBLE_EQ(g.target_bcr, 0.25);
  EXPECT_DOUBLE_EQ(g.bounds.ymax, 300);
  EXPECT_DOUBLE_EQ(g.height_hi, 70);
  EXPECT_EQ(c.pairs.n, 7u);
  EXPECT_EQ(c.pairs.seed, 9u);
  const auto& w = std::get<WptLinkModel>(c.link);
  EXPECT_DOUBLE_EQ(w.efficiency, 0.5);
  EXPECT_NEAR(w.tx_power_w, 10.0, 1e-12);
  EXPECT_NEAR(w.ref_gain, 1e-3, 1e-15);
  EXPECT_DOUBLE_EQ(w.exponent, 2.5);
  ASSERT_EQ(c.schemes.size(), 3u);
  EXPECT_EQ(c.schemes[1].kind, SchemeKind::kAlg2);
  EXPECT_EQ(c.schemes[1].stages, 3);
  ASSERT_TRUE(c.schemes[2].stat_params.has_value());
  EXPECT_DOUBLE_EQ(c.schemes[2].stat_params->b, 0.16);
  EXPECT_EQ(c.results_path, std::filesystem::path("/base/out/r.csv"));
  EXPECT_EQ(c.threads, 3u);

  const ScenarioConfig m = parse_scenario(R"({"map": "maps/a.json", "schemes": ["ex3d"]})", "/b");
  EXPECT_EQ(std::get<std::filesystem::path>(m.map), std::filesystem::path("/b/maps/a.json"));
  EXPECT_THROW(parse_scenario(R"({"map": "x", "schemes": []})"), Error);
  EXPECT_THROW(parse_scenario(R"({"schemes": ["alg1"]})"), Error);
  EXPECT_THROW(parse_scenario("{not json"), Error);
}

}  // namespace
}  // namespace uavlos
