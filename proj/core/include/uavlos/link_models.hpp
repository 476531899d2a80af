#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <variant>

#include "uavlos/environment.hpp"
#include "uavlos/geometry.hpp"

namespace uavlos {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }

/// Log-distance path loss: intercept + slope*log10(d) + shadowing margin.
struct PathLossParams {
  double intercept_db = 0.0;
  double slope_db = 0.0;
  double shadowing_db = 0.0;
};

/// Relay link evaluated as Shannon capacity in bits/s.
struct RelayLinkModel {
  double bandwidth_hz = 1e9;
  double tx_power_dbm = 30.0;
  double noise_dbm_per_hz = -169.0;
  PathLossParams los{61.4, 20.0, 1.0};
  PathLossParams nlos{72.0, 29.2, 5.0};

  /// Throws kConfiguration on a non-positive bandwidth or slope.
  void validate() const;
};

/// Wireless power transfer, harvested power eta*P*beta/d^alpha in watts.
struct WptLinkModel {
  double efficiency = 0.6;
  double tx_power_w = 10.0;
  double ref_gain = 1e-3;
  double exponent = 3.0;

  void validate() const;
};

struct StatLosParams {
  double a = 0.0;
  double b = 0.0;
};

using LinkModel = std::variant<RelayLinkModel, WptLinkModel>;

/// Link value as a function of distance; strictly decreasing.
using ValueFunction = std::function<double(double)>;

/// Throws kDomain for d <= 0.
double path_loss(const RelayLinkModel& model, double d, bool los);
/// Throws kDomain for d <= 0.
double capacity(const RelayLinkModel& model, double d, bool los = true);
/// Throws kDomain for d < 1 (below the reference distance).
double wpt_power(const WptLinkModel& model, double d);

ValueFunction value_function(const LinkModel& model);

/// Value of a single link that may be blocked. A blocked WPT link delivers
/// nothing; a blocked relay link uses the NLOS path loss.
double link_value(const LinkModel& model, double d, bool los);

/// F(p) = min of the two per-link values.
double objective(const ValueFunction& f, const FramePoint& p, const Frame& frame);

/// Logistic LOS probability for elevation angle atan(altitude / ground_range),
/// with the limit pi/2 when the ground range vanishes.
double los_probability(const StatLosParams& params, double altitude, double ground_range);

/// Max over both users of the LOS-probability-weighted average path loss (dB).
double statistical_objective(const StatLosParams& params, const RelayLinkModel& relay,
                             const FramePoint& p, const Frame& frame);

struct StatFitResult {
  StatLosParams params;
  /// Set when every sample was LOS or every sample was blocked; params then
  /// sit on a search boundary.
  bool degenerate = false;
  double residual = 0.0;
};

/// Least-squares fit of (a, b) to the empirical LOS frequency binned by
/// elevation angle over random (ground, aerial) point pairs.
StatFitResult fit_statistical_params(const Environment& env, std::size_t n_samples,
                                     std::uint64_t seed);

}  // namespace uavlos
