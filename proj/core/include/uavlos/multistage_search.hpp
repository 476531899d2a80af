#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "uavlos/closed_form.hpp"
#include "uavlos/environment.hpp"
#include "uavlos/geometry.hpp"

namespace uavlos {

/// Principal branch of the Lambert W function for x >= 0, by Newton
/// iteration to 1e-12 relative change. Throws kDomain for negative x.
double lambert_w(double x);

/// Stage count balancing the coarse first sweep against later refinements:
/// round(W(H0 ln2 / delta) / ln2), at least 1.
int optimal_stage_count(double h0, double delta);

/// Worst-case critical-distance gap 2 * delta_eff * sqrt(d0^2 - h_min^2) / L.
/// Throws kDomain when d0_tilde < h_min.
double gap_bound(double d0_tilde, double delta_eff, double L, double h_min);

struct StagePlan {
  int stages = 1;
  double delta = 1.0;
  double h0 = 0.0;

  /// Vertical spacing of stage m (1-based): 2^(M - m) * delta.
  double spacing(int m) const;
};

struct SweepConfig {
  double h_min = 0.0;
  /// Distance between LOS samples along a sweep line (m).
  double lattice_step = 3.0;
  /// Critical distance of the incumbent, bounding the swept x extent.
  double d0_ref = 0.0;
};

/// Per-user LOS stripes found along one sweep line, with endpoints on y = 0.
struct SweepResult {
  std::vector<LosStripe> stripes;
  /// Flown segments in frame coordinates (one on y = 0, or one per user on
  /// the lowest altitude plane).
  std::vector<std::pair<FramePoint, FramePoint>> segments;
};

/// Samples the line z = h on y = 0 when h >= h_min, restricted to
/// x_range and the cap of radius d0_ref. Below h_min each user walks its own
/// line on z = h_min, the central projection of that line from the user,
/// and the LOS runs are projected back onto y = 0. Every stripe endpoint
/// was a LOS sample (within 1e-6 m where a run is split at x = 0).
/// Throws kDomain for h <= 0 or an empty x range.
SweepResult sweep_segment(const Environment& env, const Frame& frame, double h,
                          std::pair<double, double> x_range, const SweepConfig& cfg,
                          bool user1 = true, bool user2 = true);

struct MultistageConfig {
  double delta = 3.0;
  int stages = 4;
  /// 0 selects min(delta, 5).
  double lattice_step = 0.0;
  double h_min = 0.0;
  bool prune = true;
  /// Per-stage diagnostics as CSV when non-null.
  std::ostream* diagnostics = nullptr;
};

struct StageDiagnostics {
  int stage = 0;
  std::size_t lines = 0;
  std::size_t intervals_found = 0;
  std::size_t intervals_pruned = 0;
  std::size_t intervals_alive = 0;
  double incumbent_d0 = 0.0;
  double gap_bound = 0.0;
  /// False when d0 exceeds sqrt(2) L / 2, where no gap guarantee applies.
  bool bounded_regime = true;
  double swept_length = 0.0;
  double connection_length = 0.0;
};

struct StoredStripe {
  LosStripe stripe;
  /// Sweep line index: altitude = h0 - level * delta.
  long level = 0;
  int stage = 0;
  bool alive = true;
};

struct MultistageResult {
  FramePoint best;
  double d0 = 0.0;
  double search_length = 0.0;
  double swept_length = 0.0;
  double connection_length = 0.0;
  std::vector<StageDiagnostics> stages;
  std::vector<StoredStripe> intervals;
};

/// Multi-stage sweep: coarse horizontal lines over the cap of p0, then
/// successively halved spacing below surviving LOS intervals, pruning
/// intervals that cannot beat the incumbent by more than the gap bound.
/// Throws kInvalidStart when p0 is not double-LOS, kConfiguration for a
/// non-positive delta or stage count.
MultistageResult run_multistage(const Environment& env, const Frame& frame, const FramePoint& p0,
                                const MultistageConfig& cfg);

}  // namespace uavlos
