#pragma once

#include "uavlos/vec.hpp"

namespace uavlos {

/// Default tolerances for geometric checks (meters).
inline constexpr double kGeomTol = 1e-9;
inline constexpr double kResidualTol = 1e-6;

enum class User { kFirst = 1, kSecond = 2 };

/// User-pair coordinate system. Origin at the users' midpoint, e2 pointing
/// from the first user to the second, e3 straight up and e1 = e2 x e3.
/// In frame coordinates the users sit at (0, -L/2, 0) and (0, L/2, 0) and
/// the middle perpendicular plane is y = 0.
class Frame {
 public:
  const WorldPoint& u1() const { return u1_; }
  const WorldPoint& u2() const { return u2_; }
  const WorldPoint& origin() const { return o_; }
  const WorldPoint& e1() const { return e1_; }
  const WorldPoint& e2() const { return e2_; }
  const WorldPoint& e3() const { return e3_; }
  double separation() const { return L_; }

  FramePoint to_frame(const WorldPoint& p) const;
  WorldPoint to_world(const FramePoint& p) const;

  /// User position in frame coordinates.
  FramePoint user(User u) const;

 private:
  friend Frame build_frame(const WorldPoint& u1, const WorldPoint& u2);
  Frame() = default;

  WorldPoint u1_, u2_, o_, e1_, e2_, e3_;
  double L_ = 0.0;
};

struct LinkDistances {
  double d1 = 0.0;
  double d2 = 0.0;
  double d0 = 0.0;  ///< critical distance, max(d1, d2)
  double r = 0.0;   ///< distance to the midpoint
};

/// Throws kDegenerateFrame when u1 == u2 and kUnsupportedInput when either
/// user is off the ground (z != 0).
Frame build_frame(const WorldPoint& u1, const WorldPoint& u2);

LinkDistances link_distances(const FramePoint& p, const Frame& frame);

inline double critical_distance(const FramePoint& p, const Frame& frame) {
  return link_distances(p, frame).d0;
}

/// Signed deviation of a point on the plane y = 0 from the vertical through
/// the midpoint. Positive when x < 0; the sign at x == 0 is +1.
double deviation_angle(const FramePoint& p);

/// Central projection from the given user onto the plane y = 0. Throws
/// kNoCrossing when the ray from the user through `p` does not reach that
/// plane moving away from the user.
FramePoint colinear_map_to_s(const FramePoint& p, User user, const Frame& frame);

/// Cap of permissible points no farther (in critical distance) than a
/// reference point, together with its enlarged search radius and the lowest
/// useful sweep height on the middle perpendicular plane.
struct CapRegion {
  double d0_ref = 0.0;
  double L = 0.0;
  double h_min = 0.0;
  double b_tilde_radius = 0.0;
  double h_prime_min = 0.0;

  /// Boundary points count as inside (kGeomTol slack).
  bool contains(const FramePoint& p, const Frame& frame) const {
    return critical_distance(p, frame) <= b_tilde_radius + kGeomTol;
  }
};

CapRegion cap_region_from_distance(double d0_ref, double L, double h_min);

/// Throws kInvalidReference when d0(p_ref) <= h_min.
CapRegion cap_region(const FramePoint& p_ref, const Frame& frame, double h_min);

/// Lowest sweep height on y = 0 whose colinear points on z = h_min are still
/// inside the cap of radius d0: L*h_min / (2*sqrt(d0^2 - h_min^2)).
double h_prime_min(double d0, double L, double h_min);

}  // namespace uavlos
