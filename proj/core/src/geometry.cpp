#include "uavlos/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uavlos/error.hpp"

namespace uavlos {

Frame build_frame(const WorldPoint& u1, const WorldPoint& u2) {
  if (std::abs(u1.z) > kGeomTol || std::abs(u2.z) > kGeomTol) {
    throw Error(ErrorCode::kUnsupportedInput, "users must be at ground altitude");
  }
  const WorldPoint d = u2 - u1;
  const double L = d.norm();
  if (L <= kGeomTol) {
    throw Error(ErrorCode::kDegenerateFrame, "users coincide");
  }
  Frame f;
  f.u1_ = u1;
  f.u2_ = u2;
  f.o_ = (u1 + u2) * 0.5;
  f.L_ = L;
  f.e2_ = d / L;
  f.e3_ = {0.0, 0.0, 1.0};
  f.e1_ = f.e2_.cross(f.e3_);
  return f;
}

FramePoint Frame::to_frame(const WorldPoint& p) const {
  const WorldPoint rel = p - o_;
  return {rel.dot(e1_), rel.dot(e2_), rel.dot(e3_)};
}

WorldPoint Frame::to_world(const FramePoint& p) const {
  return o_ + e1_ * p.x + e2_ * p.y + e3_ * p.z;
}

FramePoint Frame::user(User u) const {
  const double half = 0.5 * L_;
  return u == User::kFirst ? FramePoint{0.0, -half, 0.0} : FramePoint{0.0, half, 0.0};
}

LinkDistances link_distances(const FramePoint& p, const Frame& frame) {
  const double half = 0.5 * frame.separation();
  const double xz2 = p.x * p.x + p.z * p.z;
  const double dy1 = p.y + half;
  const double dy2 = p.y - half;
  LinkDistances out;
  out.d1 = std::sqrt(xz2 + dy1 * dy1);
  out.d2 = std::sqrt(xz2 + dy2 * dy2);
  out.d0 = std::max(out.d1, out.d2);
  out.r = std::sqrt(xz2 + p.y * p.y);
  return out;
}

double deviation_angle(const FramePoint& p) {
  const double n = p.norm();
  if (n <= kGeomTol) {
    throw Error(ErrorCode::kUndefinedAngle, "point coincides with the midpoint");
  }
  const double sign = (-p.x >= 0.0) ? 1.0 : -1.0;
  const double c = std::clamp(p.z / n, -1.0, 1.0);
  return sign * std::acos(c);
}

FramePoint colinear_map_to_s(const FramePoint& p, User user, const Frame& frame) {
  const double half = 0.5 * frame.separation();
  const FramePoint u = frame.user(user);
  // Distance of p from the user measured along e2, towards the plane y = 0.
  const double along = user == User::kFirst ? p.y + half : half - p.y;
  if (along <= kGeomTol) {
    throw Error(ErrorCode::kNoCrossing, "ray from the user does not reach the middle plane");
  }
  const double t = half / along;
  FramePoint out = u + (p - u) * t;
  out.y = 0.0;
  return out;
}

double h_prime_min(double d0, double L, double h_min) {
  return L * h_min / (2.0 * std::sqrt(d0 * d0 - h_min * h_min));
}

CapRegion cap_region_from_distance(double d0_ref, double L, double h_min) {
  if (!(d0_ref > h_min)) {
    throw Error(ErrorCode::kInvalidReference, "reference critical distance must exceed h_min");
  }
  CapRegion cap;
  cap.d0_ref = d0_ref;
  cap.L = L;
  cap.h_min = h_min;
  const double lo = std::numbers::sqrt2 * L / 2.0;
  if (d0_ref <= lo || d0_ref >= L) {
    cap.b_tilde_radius = d0_ref;
  } else {
    cap.b_tilde_radius = L * L / (2.0 * std::sqrt(L * L - d0_ref * d0_ref));
  }
  cap.h_prime_min = h_prime_min(d0_ref, L, h_min);
  return cap;
}

CapRegion cap_region(const FramePoint& p_ref, const Frame& frame, double h_min) {
  return cap_region_from_distance(critical_distance(p_ref, frame), frame.separation(), h_min);
}

}  // namespace uavlos
