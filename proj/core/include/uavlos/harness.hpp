#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uavlos/city_gen.hpp"
#include "uavlos/environment.hpp"
#include "uavlos/geometry.hpp"
#include "uavlos/link_models.hpp"

namespace uavlos {

enum class SchemeKind { kAlg1, kAlg2, kExhaustive3d, kExhaustive2dH, kExhaustive2dV, kStatistical };

/// Short names used on the command line and in result files:
/// alg1, alg2, ex3d, ex2dh, ex2dv, stat.
std::string_view to_string(SchemeKind kind);
/// Throws kConfiguration for an unknown name.
SchemeKind scheme_from_string(std::string_view name);

struct Scheme {
  SchemeKind kind = SchemeKind::kAlg1;
  /// Vertical resolution of the multi-stage search.
  double delta = 3.0;
  /// 0 picks the stage count from the initial altitude.
  int stages = 0;
  /// Grid or trajectory step (m).
  double step = 5.0;
  /// Altitude of the horizontal exhaustive plane.
  double h2d = 120.0;
  /// 0 uses the altitude of the initial double-LOS point.
  double altitude_cap = 0.0;
  /// Fitted from the map when absent.
  std::optional<StatLosParams> stat_params;

  void validate() const;
};

struct PlacementResult {
  SchemeKind scheme = SchemeKind::kAlg1;
  std::size_t pair_id = 0;
  /// NaN coordinates when nothing feasible was found.
  WorldPoint position;
  double objective = 0.0;
  double search_length = 0.0;
  bool feasible = false;
};

enum class ExhaustiveMode { k3d, k2dHorizontal, k2dVertical };

struct ExhaustiveConfig {
  ExhaustiveMode mode = ExhaustiveMode::k3d;
  double grid_step = 5.0;
  /// Top of the altitude range for the 3D and vertical grids.
  double altitude_cap = 0.0;
  /// Plane altitude for the horizontal grid.
  double h2d = 120.0;
  /// Vertical grid only: keep |x| <= this (frame coordinates).
  double max_abs_x = std::numeric_limits<double>::infinity();
};

/// Grids are lattices in the pair frame anchored at the midpoint and clipped
/// to the map bounds, so the vertical grid is a slice of the 3D one.
/// Best double-LOS grid point by objective. The search length is that of a
/// boustrophedon scan visiting every grid point. Throws kConfiguration when
/// the grid is empty.
PlacementResult exhaustive_search(const Environment& env, const Frame& frame,
                                  const LinkModel& link, const ExhaustiveConfig& cfg);

/// Grid point (3D grid, as exhaustive_search) minimizing the LOS-probability
/// weighted path loss. Feasibility and the reported objective use the
/// actual LOS state of both links.
PlacementResult statistical_baseline(const Environment& env, const Frame& frame,
                                     const LinkModel& link, const RelayLinkModel& ranking_model,
                                     const StatLosParams& params, double grid_step,
                                     double altitude_cap);

/// Runs one scheme for one user pair. `p0` is the initial double-LOS point
/// above the midpoint, if one exists.
PlacementResult run_scheme(const Environment& env, const Frame& frame, const LinkModel& link,
                           const Scheme& scheme, const std::optional<FramePoint>& p0,
                           std::size_t pair_id);

struct PairSpec {
  std::size_t n = 100;
  double min_sep = 50.0;
  double max_sep = 150.0;
  std::uint64_t seed = 1;
};

struct ScenarioConfig {
  std::variant<std::filesystem::path, CityGenParams> map;
  PairSpec pairs;
  LinkModel link = RelayLinkModel{};
  std::vector<Scheme> schemes;
  std::filesystem::path results_path;
  std::filesystem::path summary_path;
  /// Step for locating the initial point above the midpoint.
  double initial_step = 5.0;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
};

/// Parses a scenario JSON document. Relative paths are resolved against
/// `base_dir`. Throws kConfiguration on malformed input.
ScenarioConfig parse_scenario(const std::string& json_text,
                              const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct ExperimentRow {
  std::size_t pair_id = 0;
  UserPair users;
  double separation = 0.0;
  PlacementResult result;
};

/// One row per pair and scheme, sorted by (pair id, scheme order).
std::vector<ExperimentRow> run_experiment(const ScenarioConfig& config);
std::vector<ExperimentRow> run_experiment(const ScenarioConfig& config, const Environment& env);

void write_results_csv(const std::vector<ExperimentRow>& rows, std::ostream& out);

struct SummaryRow {
  SchemeKind scheme = SchemeKind::kAlg1;
  /// Separation bucket [lo, hi); both NaN for the overall row.
  double bucket_lo = 0.0;
  double bucket_hi = 0.0;
  std::size_t count = 0;
  double mean_objective = 0.0;
  double median_objective = 0.0;
  /// Mean objective over mean objective of the reference scheme.
  double ratio_to_reference = 0.0;
  double mean_search_length = 0.0;
  double feasibility_rate = 0.0;
};

/// Overall row per scheme followed by one row per scheme and bucket. Bucket
/// edges are consecutive values of `bucket_edges`. Throws kConfiguration
/// when the reference scheme has no rows.
std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows, SchemeKind reference,
                                  const std::vector<double>& bucket_edges = {});

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

}  // namespace uavlos
