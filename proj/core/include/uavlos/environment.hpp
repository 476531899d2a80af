#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uavlos/geometry.hpp"
#include "uavlos/vec.hpp"

namespace uavlos {

/// Axis-aligned world rectangle.
struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(const Vec2& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  bool contains(const Rect& r) const {
    return r.xmin >= xmin && r.xmax <= xmax && r.ymin >= ymin && r.ymax <= ymax;
  }
  bool overlaps(const Rect& r) const {
    return r.xmin <= xmax && r.xmax >= xmin && r.ymin <= ymax && r.ymax >= ymin;
  }
  bool operator==(const Rect&) const = default;
};

/// Right prism: a simple polygon footprint extruded from the ground to a
/// flat roof. The footprint is stored counter-clockwise.
class Building {
 public:
  /// Throws kInvalidMap for fewer than 3 vertices, zero area, a
  /// self-intersecting outline or a non-positive height. Clockwise input is
  /// reversed.
  Building(std::vector<Vec2> footprint, double height);

  std::span<const Vec2> footprint() const { return footprint_; }
  double height() const { return height_; }
  double area() const { return area_; }
  const Rect& bbox() const { return bbox_; }

  /// True for points strictly inside the footprint (boundary excluded).
  bool contains_strict(const Vec2& p) const;

  /// True iff the open segment (a, b) passes through the interior of the
  /// prism. Touching a wall or running exactly at roof height is not a
  /// blockage.
  bool blocks(const WorldPoint& a, const WorldPoint& b) const;

 private:
  std::vector<Vec2> footprint_;
  double height_ = 0.0;
  double area_ = 0.0;
  Rect bbox_;
};

/// City model with a uniform-grid broad phase over building footprints.
/// Immutable after construction; all queries are safe to call concurrently.
class Environment {
 public:
  /// Throws kInvalidMap when a footprint leaves the bounds or h_min is below
  /// the tallest building.
  Environment(Rect bounds, double h_min, std::vector<Building> buildings);

  const Rect& bounds() const { return bounds_; }
  double h_min() const { return h_min_; }
  double max_height() const { return max_height_; }
  std::span<const Building> buildings() const { return buildings_; }

  bool los_visible(const WorldPoint& a, const WorldPoint& b) const;
  /// Reference path that tests every building; must agree with los_visible.
  bool los_visible_naive(const WorldPoint& a, const WorldPoint& b) const;

  /// Throws kNotPermissible when p is below h_min.
  bool double_los(const WorldPoint& p, const WorldPoint& u1, const WorldPoint& u2) const;
  bool double_los(const FramePoint& p, const Frame& frame) const;
  bool los_to_user(const FramePoint& p, User user, const Frame& frame) const;

  bool inside_any_footprint(const Vec2& p) const;

  /// Footprint area over bounds area.
  double coverage_ratio() const;
  /// Stacked floor area over bounds area, counting ceil(height / floor) floors.
  double floor_area_ratio(double floor_height = 3.0) const;

 private:
  void build_index();
  template <class Fn>
  void for_each_candidate(Vec2 a, Vec2 b, Fn&& fn) const;

  Rect bounds_;
  double h_min_ = 0.0;
  double max_height_ = 0.0;
  std::vector<Building> buildings_;

  double cell_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::vector<std::size_t>> cells_;
};

/// Lowest double-LOS point on the vertical through (x, y) in frame
/// coordinates, searched at altitudes h_min + k*step. Throws
/// kNoInitialPoint above altitude_cap.
FramePoint find_initial_double_los(const Environment& env, const Frame& frame, double x, double y,
                                   double step, double altitude_cap = 1000.0);

}  // namespace uavlos
