#include "uavlos/city_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uavlos/error.hpp"
#include "uavlos/rng.hpp"

namespace uavlos {
namespace {

constexpr double kSetback = 1.0;
constexpr double kLShapeProbability = 0.25;
constexpr int kMaxAttempts = 8;

void validate(const CityGenParams& p) {
  if (!(p.bounds.width() > 0.0) || !(p.bounds.height() > 0.0)) {
    throw Error(ErrorCode::kConfiguration, "bounds must have positive extent");
  }
  if (!(p.height_lo > 0.0) || p.height_lo > p.height_hi) {
    throw Error(ErrorCode::kConfiguration, "height range must satisfy 0 < lo <= hi");
  }
  if (!(p.target_bcr >= 0.0) || !(p.target_bcr < 0.7)) {
    throw Error(ErrorCode::kConfiguration, "target coverage must lie in [0, 0.7)");
  }
  if (!(p.street_width > 0.0) || !(p.block_pitch > p.street_width)) {
    throw Error(ErrorCode::kConfiguration, "block pitch must exceed the street width");
  }
}

struct Lot {
  double x0, y0, side;
};

std::vector<Lot> layout_lots(const CityGenParams& p) {
  const int nbx = static_cast<int>(std::floor(p.bounds.width() / p.block_pitch));
  const int nby = static_cast<int>(std::floor(p.bounds.height() / p.block_pitch));
  const double off_x = p.bounds.xmin + 0.5 * (p.bounds.width() - nbx * p.block_pitch);
  const double off_y = p.bounds.ymin + 0.5 * (p.bounds.height() - nby * p.block_pitch);
  const double lot_side = 0.5 * (p.block_pitch - p.street_width);
  std::vector<Lot> lots;
  for (int by = 0; by < nby; ++by) {
    for (int bx = 0; bx < nbx; ++bx) {
      const double bx0 = off_x + bx * p.block_pitch + 0.5 * p.street_width;
      const double by0 = off_y + by * p.block_pitch + 0.5 * p.street_width;
      for (int ly = 0; ly < 2; ++ly) {
        for (int lx = 0; lx < 2; ++lx) {
          lots.push_back({bx0 + lx * lot_side, by0 + ly * lot_side, lot_side});
        }
      }
    }
  }
  return lots;
}

std::vector<Building> place_buildings(const CityGenParams& p, const std::vector<Lot>& lots,
                                      double base_side, Rng& rng) {
  std::vector<Building> out;
  out.reserve(lots.size());
  for (const Lot& lot : lots) {
    const double max_side = lot.side - 2.0 * kSetback;
    const double aspect = std::exp(rng.uniform(-0.3, 0.3));
    const bool l_shape = rng.uniform() < kLShapeProbability;
    const double notch_x = rng.uniform(0.3, 0.5);
    const double notch_y = rng.uniform(0.3, 0.5);
    const int corner = static_cast<int>(rng.below(4));
    const double jitter_x = rng.uniform();
    const double jitter_y = rng.uniform();
    const double height = rng.uniform(p.height_lo, p.height_hi);

    double side = base_side;
    if (l_shape) side /= std::sqrt(1.0 - notch_x * notch_y);
    const double sx = std::min(max_side, side * aspect);
    const double sy = std::min(max_side, side / aspect);
    if (sx < 1.0 || sy < 1.0) continue;

    const double x0 = lot.x0 + kSetback + jitter_x * (max_side - sx);
    const double y0 = lot.y0 + kSetback + jitter_y * (max_side - sy);
    const double x1 = x0 + sx;
    const double y1 = y0 + sy;
    std::vector<Vec2> fp;
    if (!l_shape) {
      fp = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    } else {
      const double nx = notch_x * sx;
      const double ny = notch_y * sy;
      // Counter-clockwise outline with one corner cut away.
      switch (corner) {
        case 0:
          fp = {{x0 + nx, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0 + ny}, {x0 + nx, y0 + ny}};
          break;
        case 1:
          fp = {{x0, y0}, {x1 - nx, y0}, {x1 - nx, y0 + ny}, {x1, y0 + ny}, {x1, y1}, {x0, y1}};
          break;
        case 2:
          fp = {{x0, y0}, {x1, y0}, {x1, y1 - ny}, {x1 - nx, y1 - ny}, {x1 - nx, y1}, {x0, y1}};
          break;
        default:
          fp = {{x0, y0}, {x1, y0}, {x1, y1}, {x0 + nx, y1}, {x0 + nx, y1 - ny}, {x0, y1 - ny}};
          break;
      }
    }
    out.emplace_back(std::move(fp), height);
  }
  return out;
}

Environment assemble(const CityGenParams& p, std::vector<Building> buildings) {
  double h_max = 0.0;
  for (const Building& b : buildings) h_max = std::max(h_max, b.height());
  const double h_min = buildings.empty() ? p.height_hi : h_max;
  return Environment(p.bounds, h_min, std::move(buildings));
}

}  // namespace

Environment generate_city(const CityGenParams& params) {
  validate(params);
  if (params.target_bcr == 0.0) {
    return assemble(params, {});
  }
  const std::vector<Lot> lots = layout_lots(params);
  if (lots.empty()) {
    throw Error(ErrorCode::kGenerationFailure, "bounds hold no complete block");
  }
  const double lot_max = lots.front().side - 2.0 * kSetback;
  const double capacity = static_cast<double>(lots.size()) * lot_max * lot_max / params.bounds.area();
  if (params.target_bcr > 0.9 * capacity) {
    throw Error(ErrorCode::kGenerationFailure,
                "target coverage exceeds what the block layout can hold");
  }

  const double target_area = params.target_bcr * params.bounds.area();
  double base_side = std::sqrt(target_area / static_cast<double>(lots.size()));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(params.seed);
    std::vector<Building> buildings = place_buildings(params, lots, base_side, rng);
    double area = 0.0;
    for (const Building& b : buildings) area += b.area();
    const double achieved = area / params.bounds.area();
    if (std::abs(achieved - params.target_bcr) <= 0.01 ||
        (attempt == kMaxAttempts - 1 && std::abs(achieved - params.target_bcr) <= 0.05)) {
      return assemble(params, std::move(buildings));
    }
    base_side *= std::sqrt(params.target_bcr / std::max(achieved, 1e-6));
  }
  throw Error(ErrorCode::kGenerationFailure, "could not reach the target coverage");
}

std::vector<UserPair> sample_user_pairs(const Environment& env, std::size_t n, double min_sep,
                                        double max_sep, std::uint64_t seed) {
  if (!(min_sep > 0.0) || min_sep > max_sep) {
    throw Error(ErrorCode::kConfiguration, "separation range must satisfy 0 < min <= max");
  }
  std::vector<UserPair> pairs;
  pairs.reserve(n);
  Rng rng(seed);
  const Rect& b = env.bounds();
  const std::size_t budget = 2000 * (n + 1);
  std::size_t attempts = 0;
  while (pairs.size() < n) {
    if (++attempts > budget) {
      throw Error(ErrorCode::kSamplingFailure, "rejection sampling exceeded its retry budget");
    }
    const Vec2 p1{rng.uniform(b.xmin, b.xmax), rng.uniform(b.ymin, b.ymax)};
    const double sep = rng.uniform(min_sep, max_sep);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Vec2 p2{p1.x + sep * std::cos(phi), p1.y + sep * std::sin(phi)};
    if (!b.contains(p2)) continue;
    if (env.inside_any_footprint(p1) || env.inside_any_footprint(p2)) continue;
    pairs.push_back({{p1.x, p1.y, 0.0}, {p2.x, p2.y, 0.0}});
  }
  return pairs;
}

}  // namespace uavlos
