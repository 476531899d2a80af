#include "uavlos/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "uavlos/error.hpp"
#include "uavlos/map_io.hpp"
#include "uavlos/multistage_search.hpp"
#include "uavlos/planar_search.hpp"
#include "uavlos/rng.hpp"

namespace uavlos {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kFallbackCapAboveHmin = 200.0;
constexpr std::size_t kStatFitSamples = 20000;

PlacementResult infeasible(SchemeKind kind, std::size_t pair_id, double search_length = 0.0) {
  PlacementResult r;
  r.scheme = kind;
  r.pair_id = pair_id;
  r.position = {kNaN, kNaN, kNaN};
  r.objective = 0.0;
  r.search_length = search_length;
  r.feasible = false;
  return r;
}

std::vector<double> axis(double lo, double hi, double step) {
  std::vector<double> v;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= n; ++k) v.push_back(lo + k * step);
  return v;
}

// Parameter range [lo, hi] of o + t*e1 inside the map bounds.
std::pair<double, double> s_line_range(const Frame& frame, const Rect& b) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const double o[2] = {frame.origin().x, frame.origin().y};
  const double d[2] = {frame.e1().x, frame.e1().y};
  const double mins[2] = {b.xmin, b.ymin};
  const double maxs[2] = {b.xmax, b.ymax};
  for (int k = 0; k < 2; ++k) {
    if (std::abs(d[k]) < 1e-15) {
      if (o[k] < mins[k] || o[k] > maxs[k]) return {1.0, 0.0};
      continue;
    }
    double t0 = (mins[k] - o[k]) / d[k];
    double t1 = (maxs[k] - o[k]) / d[k];
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
  }
  return {lo, hi};
}

struct Candidate {
  double d0;
  FramePoint p;
};

PlacementResult first_double_los(const Environment& env, const Frame& frame,
                                 const ValueFunction& f, std::vector<Candidate>& grid,
                                 SchemeKind kind, double step) {
  if (grid.empty()) throw Error(ErrorCode::kConfiguration, "exhaustive grid is empty");
  const double length = static_cast<double>(grid.size() - 1) * step;
  // The best feasible point is the double-LOS point of least critical
  // distance, so scan in that order and stop at the first hit.
  std::stable_sort(grid.begin(), grid.end(),
                   [](const Candidate& a, const Candidate& b) { return a.d0 < b.d0; });
  for (const Candidate& c : grid) {
    if (env.double_los(c.p, frame)) {
      PlacementResult r;
      r.scheme = kind;
      r.position = frame.to_world(c.p);
      r.objective = f(c.d0);
      r.search_length = length;
      r.feasible = true;
      return r;
    }
  }
  return infeasible(kind, 0, length);
}

bool inside_bounds(const Rect& b, const WorldPoint& w) {
  constexpr double kTol = 1e-9;
  return w.x >= b.xmin - kTol && w.x <= b.xmax + kTol && w.y >= b.ymin - kTol &&
         w.y <= b.ymax + kTol;
}

// Lattice aligned with the pair frame and anchored at the midpoint, kept
// where it lies inside the map bounds. The vertical-plane grid is its y = 0
// slice.
std::vector<Candidate> frame_grid(const Environment& env, const Frame& frame, double step,
                                  const std::vector<double>& zs) {
  const Rect& b = env.bounds();
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const Vec2& c : {Vec2{b.xmin, b.ymin}, Vec2{b.xmax, b.ymin}, Vec2{b.xmin, b.ymax},
                        Vec2{b.xmax, b.ymax}}) {
    const FramePoint f = frame.to_frame({c.x, c.y, 0.0});
    xlo = std::min(xlo, f.x);
    xhi = std::max(xhi, f.x);
    ylo = std::min(ylo, f.y);
    yhi = std::max(yhi, f.y);
  }
  auto ks = [&](double lo, double hi) {
    return std::pair{static_cast<long>(std::ceil(lo / step - 1e-9)),
                     static_cast<long>(std::floor(hi / step + 1e-9))};
  };
  const auto [kx0, kx1] = ks(xlo, xhi);
  const auto [ky0, ky1] = ks(ylo, yhi);
  std::vector<Candidate> grid;
  for (double z : zs) {
    for (long ky = ky0; ky <= ky1; ++ky) {
      for (long kx = kx0; kx <= kx1; ++kx) {
        const FramePoint p{kx * step, ky * step, z};
        const WorldPoint w = frame.to_world(p);
        if (!inside_bounds(b, w)) continue;
        grid.push_back({critical_distance(p, frame), p});
      }
    }
  }
  return grid;
}

std::vector<double> altitudes(double h_min, double cap, double step) {
  if (cap < h_min - kGeomTol) return {};
  return axis(h_min, std::max(cap, h_min), step);
}


}  // namespace

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kAlg1: return "alg1";
    case SchemeKind::kAlg2: return "alg2";
    case SchemeKind::kExhaustive3d: return "ex3d";
    case SchemeKind::kExhaustive2dH: return "ex2dh";
    case SchemeKind::kExhaustive2dV: return "ex2dv";
    case SchemeKind::kStatistical: return "stat";
  }
  return "unknown";
}

SchemeKind scheme_from_string(std::string_view name) {
  for (SchemeKind k : {SchemeKind::kAlg1, SchemeKind::kAlg2, SchemeKind::kExhaustive3d,
                       SchemeKind::kExhaustive2dH, SchemeKind::kExhaustive2dV,
                       SchemeKind::kStatistical}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::kConfiguration, "unknown scheme '" + std::string(name) + "'");
}

void Scheme::validate() const {
  if (!(step > 0.0)) throw Error(ErrorCode::kConfiguration, "grid step must be positive");
  if (!(delta > 0.0)) throw Error(ErrorCode::kConfiguration, "delta must be positive");
  if (stages < 0) throw Error(ErrorCode::kConfiguration, "stage count must be non-negative");
}

PlacementResult exhaustive_search(const Environment& env, const Frame& frame,
                                  const LinkModel& link, const ExhaustiveConfig& cfg) {
  if (!(cfg.grid_step > 0.0)) throw Error(ErrorCode::kConfiguration, "grid step must be positive");
  const ValueFunction f = value_function(link);
  const double h = env.h_min();
  switch (cfg.mode) {
    case ExhaustiveMode::k3d: {
      std::vector<Candidate> grid =
          frame_grid(env, frame, cfg.grid_step, altitudes(h, cfg.altitude_cap, cfg.grid_step));
      return first_double_los(env, frame, f, grid, SchemeKind::kExhaustive3d, cfg.grid_step);
    }
    case ExhaustiveMode::k2dHorizontal: {
      if (cfg.h2d < h) throw Error(ErrorCode::kConfiguration, "horizontal plane below h_min");
      std::vector<Candidate> grid = frame_grid(env, frame, cfg.grid_step, {cfg.h2d});
      return first_double_los(env, frame, f, grid, SchemeKind::kExhaustive2dH, cfg.grid_step);
    }
    case ExhaustiveMode::k2dVertical: {
      auto [lo, hi] = s_line_range(frame, env.bounds());
      lo = std::max(lo, -cfg.max_abs_x);
      hi = std::min(hi, cfg.max_abs_x);
      std::vector<Candidate> grid;
      if (lo <= hi) {
        const auto k0 = static_cast<long>(std::ceil(lo / cfg.grid_step - 1e-9));
        const auto k1 = static_cast<long>(std::floor(hi / cfg.grid_step + 1e-9));
        for (double z : altitudes(h, cfg.altitude_cap, cfg.grid_step)) {
          for (long k = k0; k <= k1; ++k) {
            const FramePoint p{k * cfg.grid_step, 0.0, z};
            if (!inside_bounds(env.bounds(), frame.to_world(p))) continue;
            grid.push_back({critical_distance(p, frame), p});
          }
        }
      }
      return first_double_los(env, frame, f, grid, SchemeKind::kExhaustive2dV, cfg.grid_step);
    }
  }
  throw Error(ErrorCode::kConfiguration, "unknown exhaustive mode");
}

PlacementResult statistical_baseline(const Environment& env, const Frame& frame,
                                     const LinkModel& link, const RelayLinkModel& ranking_model,
                                     const StatLosParams& params, double grid_step,
                                     double altitude_cap) {
  if (!(grid_step > 0.0)) throw Error(ErrorCode::kConfiguration, "grid step must be positive");
  const std::vector<Candidate> grid =
      frame_grid(env, frame, grid_step, altitudes(env.h_min(), altitude_cap, grid_step));
  if (grid.empty()) throw Error(ErrorCode::kConfiguration, "statistical grid is empty");
  std::size_t best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = statistical_objective(params, ranking_model, grid[k].p, frame);
    if (v < best_v) {
      best_v = v;
      best = k;
    }
  }
  const FramePoint& p = grid[best].p;
  const LinkDistances ld = link_distances(p, frame);
  const bool los1 = env.los_to_user(p, User::kFirst, frame);
  const bool los2 = env.los_to_user(p, User::kSecond, frame);
  PlacementResult r;
  r.scheme = SchemeKind::kStatistical;
  r.position = frame.to_world(p);
  r.objective = std::min(link_value(link, ld.d1, los1), link_value(link, ld.d2, los2));
  r.search_length = 0.0;
  r.feasible = los1 && los2;
  return r;
}

PlacementResult run_scheme(const Environment& env, const Frame& frame, const LinkModel& link,
                           const Scheme& scheme, const std::optional<FramePoint>& p0,
                           std::size_t pair_id) {
  scheme.validate();
  const double cap = scheme.altitude_cap > 0.0 ? scheme.altitude_cap
                     : p0                      ? p0->z
                                               : env.h_min() + kFallbackCapAboveHmin;
  PlacementResult r;
  switch (scheme.kind) {
    case SchemeKind::kAlg1: {
      if (!p0) return infeasible(scheme.kind, pair_id);
      PlanarSearchConfig cfg;
      cfg.step = scheme.step;
      cfg.h_min = env.h_min();
      const PlanarSearchResult pr = run_planar_search(env, frame, *p0, cfg, value_function(link));
      r.position = frame.to_world(pr.best);
      r.objective = pr.value;
      r.search_length = pr.trajectory.total_length;
      r.feasible = env.double_los(pr.best, frame);
      break;
    }
    case SchemeKind::kAlg2: {
      if (!p0) return infeasible(scheme.kind, pair_id);
      MultistageConfig cfg;
      cfg.delta = scheme.delta;
      cfg.stages = scheme.stages > 0 ? scheme.stages : optimal_stage_count(p0->z, scheme.delta);
      cfg.h_min = env.h_min();
      const MultistageResult mr = run_multistage(env, frame, *p0, cfg);
      r.position = frame.to_world(mr.best);
      r.objective = value_function(link)(mr.d0);
      r.search_length = mr.search_length;
      r.feasible = env.double_los(mr.best, frame);
      break;
    }
    case SchemeKind::kExhaustive3d:
    case SchemeKind::kExhaustive2dH:
    case SchemeKind::kExhaustive2dV: {
      ExhaustiveConfig cfg;
      cfg.mode = scheme.kind == SchemeKind::kExhaustive3d    ? ExhaustiveMode::k3d
                 : scheme.kind == SchemeKind::kExhaustive2dH ? ExhaustiveMode::k2dHorizontal
                                                             : ExhaustiveMode::k2dVertical;
      cfg.grid_step = scheme.step;
      cfg.altitude_cap = cap;
      cfg.h2d = scheme.h2d;
      r = exhaustive_search(env, frame, link, cfg);
      break;
    }
    case SchemeKind::kStatistical: {
      const StatLosParams params = scheme.stat_params
                                       ? *scheme.stat_params
                                       : fit_statistical_params(env, kStatFitSamples, 1).params;
      const RelayLinkModel* relay = std::get_if<RelayLinkModel>(&link);
      r = statistical_baseline(env, frame, link, relay ? *relay : RelayLinkModel{}, params,
                               scheme.step, cap);
      break;
    }
  }
  r.scheme = scheme.kind;
  r.pair_id = pair_id;
  return r;
}

// ---------------------------------------------------------------------------
// Scenario files

namespace {

using nlohmann::json;

double get_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

std::pair<double, double> pair_of(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::kConfiguration, "expected a two-element array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Scheme parse_scheme(const json& j) {
  Scheme s;
  if (j.is_string()) {
    s.kind = scheme_from_string(j.get<std::string>());
    return s;
  }
  s.kind = scheme_from_string(j.at("kind").get<std::string>());
  s.delta = get_or(j, "delta", s.delta);
  s.stages = static_cast<int>(get_or(j, "stages", s.stages));
  s.step = get_or(j, "step", s.step);
  s.h2d = get_or(j, "h2d", s.h2d);
  s.altitude_cap = get_or(j, "altitude_cap", s.altitude_cap);
  if (j.contains("a") || j.contains("b")) {
    s.stat_params = StatLosParams{j.at("a").get<double>(), j.at("b").get<double>()};
  }
  s.validate();
  return s;
}

LinkModel parse_link(const json& j) {
  if (j.contains("relay")) {
    const json& r = j.at("relay");
    RelayLinkModel m;
    m.bandwidth_hz = get_or(r, "W", m.bandwidth_hz);
    m.tx_power_dbm = get_or(r, "P_dbm", m.tx_power_dbm);
    m.noise_dbm_per_hz = get_or(r, "N0", m.noise_dbm_per_hz);
    if (r.contains("pl_los")) std::tie(m.los.intercept_db, m.los.slope_db) = pair_of(r["pl_los"]);
    if (r.contains("pl_nlos")) {
      std::tie(m.nlos.intercept_db, m.nlos.slope_db) = pair_of(r["pl_nlos"]);
    }
    if (r.contains("sf")) std::tie(m.los.shadowing_db, m.nlos.shadowing_db) = pair_of(r["sf"]);
    m.validate();
    return m;
  }
  if (j.contains("wpt")) {
    const json& w = j.at("wpt");
    WptLinkModel m;
    m.efficiency = get_or(w, "eta", m.efficiency);
    if (w.contains("P_dbm")) m.tx_power_w = dbm_to_watts(w["P_dbm"].get<double>());
    if (w.contains("beta_db")) m.ref_gain = db_to_ratio(w["beta_db"].get<double>());
    m.ref_gain = get_or(w, "beta", m.ref_gain);
    m.exponent = get_or(w, "alpha", m.exponent);
    m.validate();
    return m;
  }
  throw Error(ErrorCode::kConfiguration, "link must hold a 'relay' or 'wpt' object");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  try {
    const json j = json::parse(json_text);
    const json& mj = j.at("map");
    if (mj.is_string()) {
      cfg.map = resolve(base_dir, mj.get<std::string>());
    } else {
      CityGenParams g;
      g.seed = mj.value("seed", g.seed);
      g.target_bcr = get_or(mj, "bcr", g.target_bcr);
      if (mj.contains("bounds")) {
        const json& b = mj["bounds"];
        if (!b.is_array() || b.size() != 4) {
          throw Error(ErrorCode::kConfiguration, "bounds must be [xmin, ymin, xmax, ymax]");
        }
        g.bounds = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                    b[3].get<double>()};
      }
      g.block_pitch = get_or(mj, "block_pitch", g.block_pitch);
      g.street_width = get_or(mj, "street_width", g.street_width);
      g.height_lo = get_or(mj, "height_lo", g.height_lo);
      g.height_hi = get_or(mj, "height_hi", g.height_hi);
      cfg.map = g;
    }
    if (j.contains("pairs")) {
      const json& p = j["pairs"];
      cfg.pairs.n = p.value("n", cfg.pairs.n);
      cfg.pairs.min_sep = get_or(p, "min_sep", cfg.pairs.min_sep);
      cfg.pairs.max_sep = get_or(p, "max_sep", cfg.pairs.max_sep);
      cfg.pairs.seed = p.value("seed", cfg.pairs.seed);
    }
    if (j.contains("link")) cfg.link = parse_link(j["link"]);
    const json& sj = j.at("schemes");
    if (!sj.is_array() || sj.empty()) {
      throw Error(ErrorCode::kConfiguration, "schemes must be a non-empty array");
    }
    for (const json& s : sj) cfg.schemes.push_back(parse_scheme(s));
    if (j.contains("output")) {
      const json& o = j["output"];
      if (o.contains("results")) cfg.results_path = resolve(base_dir, o["results"]);
      if (o.contains("summary")) cfg.summary_path = resolve(base_dir, o["summary"]);
    }
    cfg.initial_step = get_or(j, "initial_step", cfg.initial_step);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfiguration, std::string("scenario: ") + e.what());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

// ---------------------------------------------------------------------------
// Experiment runner

std::vector<ExperimentRow> run_experiment(const ScenarioConfig& config) {
  if (const auto* path = std::get_if<std::filesystem::path>(&config.map)) {
    return run_experiment(config, load_map(*path));
  }
  return run_experiment(config, generate_city(std::get<CityGenParams>(config.map)));
}

std::vector<ExperimentRow> run_experiment(const ScenarioConfig& config, const Environment& env) {
  const std::vector<UserPair> pairs = sample_user_pairs(
      env, config.pairs.n, config.pairs.min_sep, config.pairs.max_sep, config.pairs.seed);

  std::vector<Scheme> schemes = config.schemes;
  std::optional<StatLosParams> fitted;
  for (Scheme& s : schemes) {
    s.validate();
    if (s.kind == SchemeKind::kStatistical && !s.stat_params) {
      if (!fitted) {
        fitted = fit_statistical_params(env, kStatFitSamples, Rng::derive(config.pairs.seed, 0))
                     .params;
      }
      s.stat_params = fitted;
    }
  }

  std::vector<std::vector<ExperimentRow>> per_pair(pairs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size() && !failed; i = next++) {
      try {
        const Frame frame = build_frame(pairs[i].u1, pairs[i].u2);
        std::optional<FramePoint> p0;
        try {
          p0 = find_initial_double_los(env, frame, 0.0, 0.0, config.initial_step);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNoInitialPoint) throw;
        }
        for (const Scheme& s : schemes) {
          per_pair[i].push_back(
              {i, pairs[i], frame.separation(), run_scheme(env, frame, config.link, s, p0, i)});
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  unsigned n_threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(pairs.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ExperimentRow> rows;
  for (auto& v : per_pair) {
    std::stable_sort(v.begin(), v.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
      return a.result.scheme < b.result.scheme;
    });
    for (ExperimentRow& r : v) rows.push_back(std::move(r));
  }
  return rows;
}

void write_results_csv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  out << "pair_id,u1x,u1y,u2x,u2y,L,scheme,px,py,pz,feasible,objective,search_length_m\n";
  char buf[512];
  for (const ExperimentRow& r : rows) {
    const PlacementResult& p = r.result;
    std::snprintf(buf, sizeof buf,
                  "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%s,%.6f,%.6f,%.6f,%d,%.9e,%.6f\n", r.pair_id,
                  r.users.u1.x, r.users.u1.y, r.users.u2.x, r.users.u2.y, r.separation,
                  std::string(to_string(p.scheme)).c_str(), p.position.x, p.position.y,
                  p.position.z, p.feasible ? 1 : 0, p.objective, p.search_length);
    out << buf;
  }
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows, SchemeKind reference,
                                  const std::vector<double>& bucket_edges) {
  std::vector<SchemeKind> order;
  for (const ExperimentRow& r : rows) {
    if (std::find(order.begin(), order.end(), r.result.scheme) == order.end()) {
      order.push_back(r.result.scheme);
    }
  }
  if (std::find(order.begin(), order.end(), reference) == order.end()) {
    throw Error(ErrorCode::kConfiguration, "reference scheme has no results");
  }

  auto stats = [&](SchemeKind kind, double lo, double hi, bool all) {
    SummaryRow s;
    s.scheme = kind;
    s.bucket_lo = all ? kNaN : lo;
    s.bucket_hi = all ? kNaN : hi;
    std::vector<double> obj;
    double len = 0.0;
    std::size_t feasible = 0;
    for (const ExperimentRow& r : rows) {
      if (r.result.scheme != kind) continue;
      if (!all && (r.separation < lo || r.separation >= hi)) continue;
      obj.push_back(r.result.objective);
      len += r.result.search_length;
      feasible += r.result.feasible ? 1 : 0;
    }
    s.count = obj.size();
    if (obj.empty()) {
      s.mean_objective = s.median_objective = s.mean_search_length = s.feasibility_rate = kNaN;
      return s;
    }
    const double n = static_cast<double>(obj.size());
    s.mean_objective = std::accumulate(obj.begin(), obj.end(), 0.0) / n;
    std::sort(obj.begin(), obj.end());
    const std::size_t mid = obj.size() / 2;
    s.median_objective = obj.size() % 2 ? obj[mid] : 0.5 * (obj[mid - 1] + obj[mid]);
    s.mean_search_length = len / n;
    s.feasibility_rate = static_cast<double>(feasible) / n;
    return s;
  };

  std::vector<SummaryRow> out;
  auto emit = [&](double lo, double hi, bool all) {
    const SummaryRow ref = stats(reference, lo, hi, all);
    for (SchemeKind k : order) {
      SummaryRow s = stats(k, lo, hi, all);
      s.ratio_to_reference =
          ref.count && ref.mean_objective != 0.0 ? s.mean_objective / ref.mean_objective : kNaN;
      out.push_back(s);
    }
  };
  emit(0.0, 0.0, true);
  for (std::size_t b = 0; b + 1 < bucket_edges.size(); ++b) {
    emit(bucket_edges[b], bucket_edges[b + 1], false);
  }
  return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "scheme,bucket_lo,bucket_hi,count,mean_objective,median_objective,ratio_to_reference,"
         "mean_search_length_m,feasibility_rate\n";
  char buf[512];
  for (const SummaryRow& s : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.3f,%.3f,%zu,%.9e,%.9e,%.6f,%.6f,%.6f\n",
                  std::string(to_string(s.scheme)).c_str(), s.bucket_lo, s.bucket_hi, s.count,
                  s.mean_objective, s.median_objective, s.ratio_to_reference,
                  s.mean_search_length, s.feasibility_rate);
    out << buf;
  }
}

}  // namespace uavlos
