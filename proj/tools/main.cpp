// Command-line front end: map generation, single-pair planning and batch
// experiments.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uavlos/city_gen.hpp"
#include "uavlos/error.hpp"
#include "uavlos/harness.hpp"
#include "uavlos/map_io.hpp"
#include "uavlos/multistage_search.hpp"
#include "uavlos/planar_search.hpp"

namespace {

using namespace uavlos;

std::vector<double> parse_numbers(const std::string& text, std::size_t expected,
                                  const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "not a number: '" + item + "'");
    }
  }
  if (v.size() != expected) {
    throw CLI::ValidationError(what, "expected " + std::to_string(expected) + " comma-separated values");
  }
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  return out;
}

int generate_map(std::uint64_t seed, double bcr, const std::string& bounds_text,
                 double height_lo, double height_hi, const std::string& out_path) {
  CityGenParams p;
  p.seed = seed;
  p.target_bcr = bcr;
  const std::vector<double> b = parse_numbers(bounds_text, 4, "--bounds");
  p.bounds = {b[0], b[1], b[2], b[3]};
  p.height_lo = height_lo;
  p.height_hi = height_hi;
  const Environment env = generate_city(p);
  save_map(env, out_path);
  std::fprintf(stderr, "wrote %s: %zu buildings, coverage %.3f, h_min %.2f\n", out_path.c_str(),
               env.buildings().size(), env.coverage_ratio(), env.h_min());
  return 0;
}

struct PlanArgs {
  std::string map, u1, u2, algo = "alg2", out, trajectory, diagnostics;
  double delta = 3.0;
  int stages = 0;
  double step = 5.0;
  double h2d = 120.0;
  bool wpt = false;
};

int plan(const PlanArgs& a) {
  const Environment env = load_map(a.map);
  const std::vector<double> c1 = parse_numbers(a.u1, 2, "--u1");
  const std::vector<double> c2 = parse_numbers(a.u2, 2, "--u2");
  const Frame frame = build_frame({c1[0], c1[1], 0.0}, {c2[0], c2[1], 0.0});
  const LinkModel link = a.wpt ? LinkModel{WptLinkModel{}} : LinkModel{RelayLinkModel{}};

  Scheme scheme;
  scheme.kind = scheme_from_string(a.algo);
  scheme.delta = a.delta;
  scheme.stages = a.stages;
  scheme.step = a.step;
  scheme.h2d = a.h2d;

  std::optional<FramePoint> p0;
  try {
    p0 = find_initial_double_los(env, frame, 0.0, 0.0, a.step);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoInitialPoint) throw;
  }

  if (!a.trajectory.empty() && scheme.kind == SchemeKind::kAlg1 && p0) {
    PlanarSearchConfig cfg;
    cfg.step = a.step;
    cfg.h_min = env.h_min();
    const PlanarSearchResult pr = run_planar_search(env, frame, *p0, cfg, value_function(link));
    std::ofstream out = open_out(a.trajectory);
    write_trajectory_csv(pr.trajectory, out);
  }
  if (!a.diagnostics.empty() && scheme.kind == SchemeKind::kAlg2 && p0) {
    std::ofstream out = open_out(a.diagnostics);
    MultistageConfig cfg;
    cfg.delta = a.delta;
    cfg.stages = a.stages > 0 ? a.stages : optimal_stage_count(p0->z, a.delta);
    cfg.h_min = env.h_min();
    cfg.diagnostics = &out;
    run_multistage(env, frame, *p0, cfg);
  }

  const PlacementResult r = run_scheme(env, frame, link, scheme, p0, 0);
  nlohmann::json j;
  j["scheme"] = std::string(to_string(r.scheme));
  j["u1"] = {c1[0], c1[1]};
  j["u2"] = {c2[0], c2[1]};
  j["L"] = frame.separation();
  j["feasible"] = r.feasible;
  // A blocked statistical placement still has a position.
  if (!std::isnan(r.position.x)) {
    j["position"] = {r.position.x, r.position.y, r.position.z};
  } else {
    j["position"] = nullptr;
  }
  j["objective"] = r.objective;
  j["search_length_m"] = r.search_length;
  if (p0) {
    const WorldPoint w = frame.to_world(*p0);
    j["initial_point"] = {w.x, w.y, w.z};
  }
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    open_out(a.out) << text;
  }
  return 0;
}

int bench(const std::string& config_path, const std::string& out_path,
          const std::string& summary_path) {
  ScenarioConfig cfg = load_scenario(config_path);
  if (!out_path.empty()) cfg.results_path = out_path;
  if (!summary_path.empty()) cfg.summary_path = summary_path;
  if (cfg.results_path.empty()) {
    throw Error(ErrorCode::kConfiguration, "no results path given (--out or output.results)");
  }
  const std::vector<ExperimentRow> rows = run_experiment(cfg);
  {
    std::ofstream out = open_out(cfg.results_path.string());
    write_results_csv(rows, out);
  }
  if (!cfg.summary_path.empty()) {
    SchemeKind ref = rows.front().result.scheme;
    for (const Scheme& s : cfg.schemes) {
      if (s.kind == SchemeKind::kExhaustive3d) ref = s.kind;
    }
    std::ofstream out = open_out(cfg.summary_path.string());
    write_summary_csv(summarize(rows, ref, {50.0, 100.0, 150.0, 200.0, 250.0, 300.0}), out);
  }
  std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), cfg.results_path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LOS-aware UAV placement toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  double bcr = 0.3;
  std::string bounds = "0,0,500,500";
  double height_lo = 50.0;
  double height_hi = 80.0;
  std::string map_out;
  CLI::App* gen = app.add_subcommand("generate-map", "Generate a synthetic block city");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--bcr", bcr, "Target building coverage ratio")->check(CLI::Range(0.0, 0.7));
  gen->add_option("--bounds", bounds, "xmin,ymin,xmax,ymax in meters");
  gen->add_option("--height-lo", height_lo, "Lowest building height (m)");
  gen->add_option("--height-hi", height_hi, "Tallest building height (m)");
  gen->add_option("--out", map_out, "Output map JSON")->required();

  PlanArgs pa;
  CLI::App* pl = app.add_subcommand("plan", "Place a UAV for one user pair");
  pl->add_option("--map", pa.map, "Map JSON")->required()->check(CLI::ExistingFile);
  pl->add_option("--u1", pa.u1, "First user x,y")->required();
  pl->add_option("--u2", pa.u2, "Second user x,y")->required();
  pl->add_option("--algo", pa.algo, "alg1|alg2|ex3d|ex2dh|ex2dv|stat")
      ->check(CLI::IsMember({"alg1", "alg2", "ex3d", "ex2dh", "ex2dv", "stat"}));
  pl->add_option("--delta", pa.delta, "Vertical resolution for alg2 (m)");
  pl->add_option("--stages", pa.stages, "Stage count for alg2 (0 = automatic)");
  pl->add_option("--step", pa.step, "Trajectory or grid step (m)");
  pl->add_option("--h2d", pa.h2d, "Altitude of the horizontal exhaustive plane (m)");
  pl->add_flag("--wpt", pa.wpt, "Score with the power-transfer model instead of relaying");
  pl->add_option("--trajectory", pa.trajectory, "alg1: write the trajectory CSV here");
  pl->add_option("--diagnostics", pa.diagnostics, "alg2: write per-stage diagnostics CSV here");
  pl->add_option("--out", pa.out, "Result JSON (default stdout)");

  std::string config_path, results_out, summary_out;
  CLI::App* be = app.add_subcommand("bench", "Run a scenario over many user pairs");
  be->add_option("--config", config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  be->add_option("--out", results_out, "Results CSV (overrides the scenario)");
  be->add_option("--summary", summary_out, "Summary CSV (overrides the scenario)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return generate_map(seed, bcr, bounds, height_lo, height_hi, map_out);
    if (pl->parsed()) return plan(pa);
    if (be->parsed()) return bench(config_path, results_out, summary_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return 2;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }
  return 0;
}
