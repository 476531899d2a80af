#include "uavlos/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavlos/error.hpp"

namespace uavlos {
namespace {

constexpr double kParamEps = 1e-12;

double signed_area(std::span<const Vec2> poly) {
  double a = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    a += poly[i].cross(poly[(i + 1) % n]);
  }
  return 0.5 * a;
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = (b - a).cross(c - a);
  const double scale = std::max({1.0, (b - a).norm(), (c - a).norm()});
  if (std::abs(v) <= 1e-12 * scale * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return p.x >= std::min(a.x, b.x) - kGeomTol && p.x <= std::max(a.x, b.x) + kGeomTol &&
         p.y >= std::min(a.y, b.y) - kGeomTol && p.y <= std::max(a.y, b.y) + kGeomTol;
}

bool segments_touch(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool is_simple(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    if ((b - a).norm() <= kGeomTol) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_touch(a, b, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

}  // namespace

Building::Building(std::vector<Vec2> footprint, double height)
    : footprint_(std::move(footprint)), height_(height) {
  if (footprint_.size() < 3) {
    throw Error(ErrorCode::kInvalidMap, "footprint needs at least 3 vertices");
  }
  if (!(height_ > 0.0) || !std::isfinite(height_)) {
    throw Error(ErrorCode::kInvalidMap, "building height must be positive");
  }
  double a = signed_area(footprint_);
  if (std::abs(a) <= kGeomTol) {
    throw Error(ErrorCode::kInvalidMap, "footprint has zero area");
  }
  if (a < 0.0) {
    std::reverse(footprint_.begin(), footprint_.end());
    a = -a;
  }
  if (!is_simple(footprint_)) {
    throw Error(ErrorCode::kInvalidMap, "footprint is not a simple polygon");
  }
  area_ = a;
  bbox_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& v : footprint_) {
    bbox_.xmin = std::min(bbox_.xmin, v.x);
    bbox_.ymin = std::min(bbox_.ymin, v.y);
    bbox_.xmax = std::max(bbox_.xmax, v.x);
    bbox_.ymax = std::max(bbox_.ymax, v.y);
  }
}

bool Building::contains_strict(const Vec2& p) const {
  if (p.x <= bbox_.xmin || p.x >= bbox_.xmax || p.y <= bbox_.ymin || p.y >= bbox_.ymax) {
    return false;
  }
  bool inside = false;
  const std::size_t n = footprint_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = footprint_[i];
    const Vec2& b = footprint_[j];
    if (point_segment_distance(p, a, b) <= kGeomTol) return false;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool Building::blocks(const WorldPoint& a, const WorldPoint& b) const {
  const double h = height_;
  if (a.z >= h && b.z >= h) return false;

  // Parameter range of the segment that runs strictly below the roof.
  double t_lo = 0.0;
  double t_hi = 1.0;
  if (a.z != b.z) {
    const double t_roof = (h - a.z) / (b.z - a.z);
    if (b.z > a.z) {
      t_hi = std::min(1.0, t_roof);
    } else {
      t_lo = std::max(0.0, t_roof);
    }
  }
  if (t_hi - t_lo <= kParamEps) return false;

  const Vec2 A{a.x, a.y};
  const Vec2 D{b.x - a.x, b.y - a.y};
  const double dlen = D.norm();
  if (dlen <= kGeomTol) {
    return contains_strict(A);
  }

  const Vec2 p_lo = A + D * t_lo;
  const Vec2 p_hi = A + D * t_hi;
  const Rect sub{std::min(p_lo.x, p_hi.x), std::min(p_lo.y, p_hi.y), std::max(p_lo.x, p_hi.x),
                 std::max(p_lo.y, p_hi.y)};
  if (!bbox_.overlaps(sub)) return false;

  // Split [t_lo, t_hi] at every crossing with the outline. Each piece lies
  // entirely inside or entirely outside the footprint, so its midpoint
  // decides.
  std::vector<double> params{t_lo, t_hi};
  const std::size_t n = footprint_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& P = footprint_[i];
    const Vec2& Q = footprint_[(i + 1) % n];
    const Vec2 E = Q - P;
    const Vec2 AP = P - A;
    const double denom = D.cross(E);
    if (std::abs(denom) > 1e-12 * dlen * E.norm()) {
      const double t = AP.cross(E) / denom;
      const double s = AP.cross(D) / denom;
      if (s >= -kParamEps && s <= 1.0 + kParamEps && t > t_lo && t < t_hi) {
        params.push_back(t);
      }
    } else if (std::abs(AP.cross(D)) <= kGeomTol * dlen) {
      // Collinear overlap: the segment runs along this wall.
      for (const Vec2& v : {P, Q}) {
        const double t = (v - A).dot(D) / (dlen * dlen);
        if (t > t_lo && t < t_hi) params.push_back(t);
      }
    }
  }
  std::sort(params.begin(), params.end());
  for (std::size_t k = 0; k + 1 < params.size(); ++k) {
    if (params[k + 1] - params[k] <= kParamEps) continue;
    const double tm = 0.5 * (params[k] + params[k + 1]);
    if (contains_strict(A + D * tm)) return true;
  }
  return false;
}

Environment::Environment(Rect bounds, double h_min, std::vector<Building> buildings)
    : bounds_(bounds), h_min_(h_min), buildings_(std::move(buildings)) {
  if (!(bounds_.width() > 0.0) || !(bounds_.height() > 0.0)) {
    throw Error(ErrorCode::kInvalidMap, "bounds must have positive extent");
  }
  if (!(h_min_ >= 0.0) || !std::isfinite(h_min_)) {
    throw Error(ErrorCode::kInvalidMap, "h_min must be non-negative");
  }
  for (const Building& b : buildings_) {
    max_height_ = std::max(max_height_, b.height());
    if (!bounds_.contains(b.bbox())) {
      throw Error(ErrorCode::kInvalidMap, "building footprint leaves the map bounds");
    }
  }
  if (h_min_ < max_height_) {
    throw Error(ErrorCode::kInvalidMap, "h_min is below the tallest building");
  }
  build_index();
}

void Environment::build_index() {
  const double n = static_cast<double>(std::max<std::size_t>(1, buildings_.size()));
  cell_ = std::clamp(std::sqrt(bounds_.area() / n), 5.0, 200.0);
  nx_ = std::max(1, static_cast<int>(std::ceil(bounds_.width() / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil(bounds_.height() / cell_)));
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  auto cell_x = [&](double x) {
    return std::clamp(static_cast<int>(std::floor((x - bounds_.xmin) / cell_)), 0, nx_ - 1);
  };
  auto cell_y = [&](double y) {
    return std::clamp(static_cast<int>(std::floor((y - bounds_.ymin) / cell_)), 0, ny_ - 1);
  };
  for (std::size_t i = 0; i < buildings_.size(); ++i) {
    const Rect& bb = buildings_[i].bbox();
    for (int cy = cell_y(bb.ymin); cy <= cell_y(bb.ymax); ++cy) {
      for (int cx = cell_x(bb.xmin); cx <= cell_x(bb.xmax); ++cx) {
        cells_[static_cast<std::size_t>(cy) * nx_ + cx].push_back(i);
      }
    }
  }
}

// Visits every grid cell crossed by the 2D segment a->b (clipped to the
// bounds) and reports the buildings registered there. A building may be
// reported more than once.
template <class Fn>
void Environment::for_each_candidate(Vec2 a, Vec2 b, Fn&& fn) const {
  // Liang-Barsky clip against the bounds.
  const Vec2 d = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - bounds_.xmin, bounds_.xmax - a.x, a.y - bounds_.ymin,
                       bounds_.ymax - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return;
    } else {
      const double r = q[k] / p[k];
      if (p[k] < 0.0) {
        t0 = std::max(t0, r);
      } else {
        t1 = std::min(t1, r);
      }
    }
  }
  if (t0 > t1) return;
  const Vec2 s = a + d * t0;
  const Vec2 e = a + d * t1;

  const double fx = (s.x - bounds_.xmin) / cell_;
  const double fy = (s.y - bounds_.ymin) / cell_;
  int cx = std::clamp(static_cast<int>(std::floor(fx)), 0, nx_ - 1);
  int cy = std::clamp(static_cast<int>(std::floor(fy)), 0, ny_ - 1);
  const int ex = std::clamp(static_cast<int>(std::floor((e.x - bounds_.xmin) / cell_)), 0, nx_ - 1);
  const int ey = std::clamp(static_cast<int>(std::floor((e.y - bounds_.ymin) / cell_)), 0, ny_ - 1);

  const Vec2 de = e - s;
  const int step_x = de.x > 0 ? 1 : (de.x < 0 ? -1 : 0);
  const int step_y = de.y > 0 ? 1 : (de.y < 0 ? -1 : 0);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Normalized to the clipped segment: t in [0, 1].
  double t_max_x = kInf, t_max_y = kInf, t_delta_x = kInf, t_delta_y = kInf;
  if (step_x != 0) {
    const double next = bounds_.xmin + (cx + (step_x > 0 ? 1 : 0)) * cell_;
    t_max_x = (next - s.x) / de.x;
    t_delta_x = cell_ / std::abs(de.x);
  }
  if (step_y != 0) {
    const double next = bounds_.ymin + (cy + (step_y > 0 ? 1 : 0)) * cell_;
    t_max_y = (next - s.y) / de.y;
    t_delta_y = cell_ / std::abs(de.y);
  }
  const int max_steps = nx_ + ny_ + 2;
  for (int it = 0; it <= max_steps; ++it) {
    for (std::size_t idx : cells_[static_cast<std::size_t>(cy) * nx_ + cx]) {
      if (fn(idx)) return;
    }
    if (cx == ex && cy == ey) break;
    if (t_max_x < t_max_y) {
      if (t_max_x > 1.0) break;
      cx += step_x;
      t_max_x += t_delta_x;
    } else {
      if (t_max_y > 1.0) break;
      cy += step_y;
      t_max_y += t_delta_y;
    }
    if (cx < 0 || cx >= nx_ || cy < 0 || cy >= ny_) break;
  }
}

bool Environment::los_visible(const WorldPoint& a, const WorldPoint& b) const {
  if (buildings_.empty()) return true;
  if (a.z >= max_height_ && b.z >= max_height_) return true;
  // Only the part of the segment below the tallest roof can be blocked.
  WorldPoint lo = a;
  WorldPoint hi = b;
  if ((a.z < max_height_) != (b.z < max_height_)) {
    const WorldPoint cut = a + (b - a) * ((max_height_ - a.z) / (b.z - a.z));
    if (a.z < max_height_) {
      hi = cut;
    } else {
      lo = cut;
    }
  }
  bool blocked = false;
  for_each_candidate(xy(lo), xy(hi), [&](std::size_t idx) {
    blocked = buildings_[idx].blocks(a, b);
    return blocked;
  });
  return !blocked;
}

bool Environment::los_visible_naive(const WorldPoint& a, const WorldPoint& b) const {
  for (const Building& bld : buildings_) {
    if (bld.blocks(a, b)) return false;
  }
  return true;
}

bool Environment::double_los(const WorldPoint& p, const WorldPoint& u1,
                             const WorldPoint& u2) const {
  if (p.z < h_min_ - kGeomTol) {
    throw Error(ErrorCode::kNotPermissible, "position below the minimum flight altitude");
  }
  return los_visible(p, u1) && los_visible(p, u2);
}

bool Environment::double_los(const FramePoint& p, const Frame& frame) const {
  return double_los(frame.to_world(p), frame.u1(), frame.u2());
}

bool Environment::los_to_user(const FramePoint& p, User user, const Frame& frame) const {
  return los_visible(frame.to_world(p), user == User::kFirst ? frame.u1() : frame.u2());
}

bool Environment::inside_any_footprint(const Vec2& p) const {
  for (const Building& b : buildings_) {
    if (b.bbox().contains(p) && (b.contains_strict(p) || [&] {
          const auto fp = b.footprint();
          for (std::size_t i = 0; i < fp.size(); ++i) {
            if (point_segment_distance(p, fp[i], fp[(i + 1) % fp.size()]) <= kGeomTol) {
              return true;
            }
          }
          return false;
        }())) {
      return true;
    }
  }
  return false;
}

double Environment::coverage_ratio() const {
  double a = 0.0;
  for (const Building& b : buildings_) a += b.area();
  return a / bounds_.area();
}

double Environment::floor_area_ratio(double floor_height) const {
  double a = 0.0;
  for (const Building& b : buildings_) a += b.area() * std::ceil(b.height() / floor_height);
  return a / bounds_.area();
}

FramePoint find_initial_double_los(const Environment& env, const Frame& frame, double x, double y,
                                   double step, double altitude_cap) {
  if (!(step > 0.0)) {
    throw Error(ErrorCode::kDomain, "step must be positive");
  }
  for (int k = 0;; ++k) {
    const FramePoint p{x, y, env.h_min() + k * step};
    if (p.z > altitude_cap) break;
    if (env.double_los(p, frame)) return p;
  }
  throw Error(ErrorCode::kNoInitialPoint, "no double-LOS point below the altitude cap");
}

}  // namespace uavlos
