#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "uavlos/geometry.hpp"

namespace uavlos {

/// Vertical LOS ray on y = 0 for one user, given by its lowest point.
struct LosRay {
  FramePoint foot;
  User user = User::kFirst;
};

/// Horizontal bottom segment of a LOS half-stripe on y = 0. Both endpoints
/// share one altitude and one sign of x.
struct LosStripe {
  FramePoint a;
  FramePoint b;
  User user = User::kFirst;

  double x_lo() const { return std::min(a.x, b.x); }
  double x_hi() const { return std::max(a.x, b.x); }
  double height() const { return a.z; }
};

/// Lowest point with LOS to both users on the vertical line where the planes
/// through (u1, a1) and (u2, a2) meet. Throws kGuardViolation unless both
/// feet lie strictly on the same side of x = 0, and kUnsupportedInput when
/// the rays are not for users 1 and 2 respectively.
FramePoint double_ray_optimum(const LosRay& r1, const LosRay& r2, const Frame& frame);

/// Point of least critical distance over all double-ray optima whose feet
/// range over the two stripes. Since every link value function decreases
/// with distance this also maximizes the objective. Solutions below
/// `altitude_floor` are lifted to it along their vertical line, and the
/// search accounts for the lift. Throws kUnsupportedConfiguration when the
/// stripes lie on opposite sides of x = 0 or are not horizontal.
FramePoint double_stripe_optimum(const LosStripe& s1, const LosStripe& s2, const Frame& frame,
                                 double altitude_floor = 0.0);

/// One solved stripe pair, indices into the input sets.
struct PairSolution {
  FramePoint point;
  double d0 = 0.0;
  std::size_t i1 = 0;
  std::size_t i2 = 0;
};

/// Solves every same-side pair, sorted by (d0, x, y, z).
std::vector<PairSolution> solve_interval_pairs(std::span<const LosStripe> i1,
                                               std::span<const LosStripe> i2, const Frame& frame,
                                               double altitude_floor = 0.0);

/// Best pair solution. Throws kNoCandidate when either set is empty or no
/// pair shares a side.
FramePoint best_over_intervals(std::span<const LosStripe> i1, std::span<const LosStripe> i2,
                               const Frame& frame, double altitude_floor = 0.0);

}  // namespace uavlos
