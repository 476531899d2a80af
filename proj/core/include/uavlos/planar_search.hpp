#pragma once

#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "uavlos/environment.hpp"
#include "uavlos/geometry.hpp"
#include "uavlos/link_models.hpp"

namespace uavlos {

struct PlanarSearchConfig {
  /// Distance flown per move (m), both for descents and arc steps.
  double step = 5.0;
  double h_min = 0.0;
  /// Each sweep stops once |theta| would pass this angle.
  double max_theta = std::numbers::pi / 2.0;
  /// Initial points above this altitude are rejected.
  double altitude_cap = 1000.0;

  /// Throws kConfiguration for a non-positive step or h_min below the
  /// tallest building.
  void validate(const Environment& env) const;
};

/// Waypoints on the plane y = 0 in frame coordinates. The search flies two
/// sweeps; `stage_starts` holds the index of the first waypoint of each.
/// The transit between sweeps is reported separately and not included in
/// `total_length`.
struct Trajectory {
  std::vector<FramePoint> waypoints;
  std::vector<bool> double_los_flags;
  std::vector<std::size_t> stage_starts;
  double total_length = 0.0;
  double transit_length = 0.0;

  /// Cumulative within-sweep length at each waypoint.
  std::vector<double> cumulative_length() const;
};

struct PlanarSearchResult {
  FramePoint best;
  double value = 0.0;
  double d0 = 0.0;
  Trajectory trajectory;
  /// Radius of the incumbent after each update, in update order.
  std::vector<double> incumbent_radii;
};

/// Dynamic descend-or-circle search on the middle perpendicular plane,
/// starting from a double-LOS point p0 with y = 0. The result minimizes the
/// distance to the users' midpoint over the double-LOS waypoints visited.
/// Throws kInvalidStart when p0 is off the plane, below h_min or not
/// double-LOS.
PlanarSearchResult run_planar_search(const Environment& env, const Frame& frame,
                                     const FramePoint& p0, const PlanarSearchConfig& cfg,
                                     const ValueFunction& f);

/// Writes `x,y,z,double_los,cum_length` rows with a header line.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

}  // namespace uavlos
