#include <benchmark/benchmark.h>

#include <optional>
#include <vector>

#include "uavlos/city_gen.hpp"
#include "uavlos/error.hpp"
#include "uavlos/harness.hpp"
#include "uavlos/multistage_search.hpp"
#include "uavlos/planar_search.hpp"
#include "uavlos/rng.hpp"

namespace {

using namespace uavlos;

const Environment& dense_city() {
  static const Environment env = [] {
    CityGenParams g;
    g.seed = 21;
    g.target_bcr = 0.4;
    return generate_city(g);
  }();
  return env;
}

struct Segment {
  WorldPoint a, b;
};

std::vector<Segment> random_segments(const Environment& env, std::size_t n) {
  Rng rng(5);
  const Rect& r = env.bounds();
  std::vector<Segment> out;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back({{rng.uniform(r.xmin, r.xmax), rng.uniform(r.ymin, r.ymax), 0.0},
                   {rng.uniform(r.xmin, r.xmax), rng.uniform(r.ymin, r.ymax),
                    env.h_min() + rng.uniform(0, 100)}});
  }
  return out;
}

void BM_LosIndexed(benchmark::State& state) {
  const Environment& env = dense_city();
  const std::vector<Segment> segs = random_segments(env, 1024);
  std::size_t k = 0;
  for (auto _ : state) {
    const Segment& s = segs[k++ % segs.size()];
    benchmark::DoNotOptimize(env.los_visible(s.a, s.b));
  }
}
BENCHMARK(BM_LosIndexed);

void BM_LosNaive(benchmark::State& state) {
  const Environment& env = dense_city();
  const std::vector<Segment> segs = random_segments(env, 1024);
  std::size_t k = 0;
  for (auto _ : state) {
    const Segment& s = segs[k++ % segs.size()];
    benchmark::DoNotOptimize(env.los_visible_naive(s.a, s.b));
  }
}
BENCHMARK(BM_LosNaive);

struct Job {
  Frame frame;
  FramePoint p0;
};

const std::vector<Job>& jobs() {
  static const std::vector<Job> out = [] {
    std::vector<Job> v;
    const Environment& env = dense_city();
    for (const UserPair& up : sample_user_pairs(env, 40, 50, 150, 8)) {
      const Frame frame = build_frame(up.u1, up.u2);
      try {
        v.push_back({frame, find_initial_double_los(env, frame, 0, 0, 5, 1000)});
      } catch (const Error&) {
      }
    }
    return v;
  }();
  return out;
}

void BM_PlanarSearch(benchmark::State& state) {
  const Environment& env = dense_city();
  const ValueFunction f = value_function(RelayLinkModel{});
  std::size_t k = 0;
  for (auto _ : state) {
    const Job& j = jobs()[k++ % jobs().size()];
    PlanarSearchConfig cfg;
    cfg.h_min = env.h_min();
    benchmark::DoNotOptimize(run_planar_search(env, j.frame, j.p0, cfg, f));
  }
}
BENCHMARK(BM_PlanarSearch);

void BM_Multistage(benchmark::State& state) {
  const Environment& env = dense_city();
  std::size_t k = 0;
  for (auto _ : state) {
    const Job& j = jobs()[k++ % jobs().size()];
    MultistageConfig cfg;
    cfg.h_min = env.h_min();
    benchmark::DoNotOptimize(run_multistage(env, j.frame, j.p0, cfg));
  }
}
BENCHMARK(BM_Multistage);

void BM_Exhaustive3d(benchmark::State& state) {
  const Environment& env = dense_city();
  std::size_t k = 0;
  for (auto _ : state) {
    const Job& j = jobs()[k++ % jobs().size()];
    ExhaustiveConfig cfg;
    cfg.altitude_cap = j.p0.z;
    benchmark::DoNotOptimize(exhaustive_search(env, j.frame, RelayLinkModel{}, cfg));
  }
}
BENCHMARK(BM_Exhaustive3d)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
