#include "uavlos/planar_search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "uavlos/error.hpp"

namespace uavlos {
namespace {

constexpr std::size_t kMaxMoves = 10'000'000;

double radius(const FramePoint& p) { return std::hypot(p.x, p.z); }

// theta measured from the upward vertical, positive towards -x.
double polar_angle(const FramePoint& p) { return std::atan2(-p.x, p.z); }

FramePoint on_arc(double rho, double theta) {
  return {-rho * std::sin(theta), 0.0, rho * std::cos(theta)};
}

class Sweeper {
 public:
  Sweeper(const Environment& env, const Frame& frame, const PlanarSearchConfig& cfg,
          PlanarSearchResult& out)
      : env_(env), frame_(frame), cfg_(cfg), out_(out) {}

  void visit(const FramePoint& p) {
    Trajectory& t = out_.trajectory;
    const bool start = t.stage_starts.empty() || t.stage_starts.back() == t.waypoints.size();
    if (!start) t.total_length += distance(t.waypoints.back(), p);
    const bool dl = env_.double_los(p, frame_);
    t.waypoints.push_back(p);
    t.double_los_flags.push_back(dl);
    if (dl && radius(p) < best_r_) {
      best_r_ = radius(p);
      out_.best = p;
      out_.incumbent_radii.push_back(best_r_);
    }
  }

  // One sweep; direction +1 turns towards -x first, -1 towards +x.
  void sweep(FramePoint p, int direction) {
    Trajectory& t = out_.trajectory;
    if (!t.waypoints.empty()) t.transit_length += distance(t.waypoints.back(), p);
    t.stage_starts.push_back(t.waypoints.size());
    visit(p);
    const double h = cfg_.h_min;
    for (std::size_t moves = 0; moves < kMaxMoves; ++moves) {
      if (p.z <= h + kGeomTol) return;
      if (t.double_los_flags.back()) {
        p = {p.x, 0.0, std::max(p.z - cfg_.step, h)};
        visit(p);
        continue;
      }
      const double rho = radius(p);
      double theta = polar_angle(p) + direction * cfg_.step / rho;
      bool last = false;
      // Clamp to where the circle meets the lowest altitude.
      const double floor_theta = std::acos(std::clamp(h / rho, -1.0, 1.0));
      if (std::abs(theta) >= floor_theta && theta * direction > 0.0) {
        theta = direction * floor_theta;
        last = true;
      }
      if (std::abs(theta) > cfg_.max_theta) {
        theta = direction * cfg_.max_theta;
        last = true;
      }
      p = on_arc(rho, theta);
      if (last) p.z = std::max(p.z, h);
      visit(p);
      if (last) return;
    }
    throw Error(ErrorCode::kGuardViolation, "planar sweep did not terminate");
  }

  double best_radius() const { return best_r_; }

 private:
  const Environment& env_;
  const Frame& frame_;
  const PlanarSearchConfig& cfg_;
  PlanarSearchResult& out_;
  double best_r_ = std::numeric_limits<double>::infinity();
};

}  // namespace

void PlanarSearchConfig::validate(const Environment& env) const {
  if (!(step > 0.0)) throw Error(ErrorCode::kConfiguration, "step must be positive");
  if (h_min < env.max_height()) {
    throw Error(ErrorCode::kConfiguration, "h_min is below the tallest building");
  }
  if (!(max_theta > 0.0)) throw Error(ErrorCode::kConfiguration, "max_theta must be positive");
}

std::vector<double> Trajectory::cumulative_length() const {
  std::vector<double> cum(waypoints.size(), 0.0);
  std::size_t next_stage = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const bool start = next_stage < stage_starts.size() && stage_starts[next_stage] == i;
    if (start) {
      ++next_stage;
    } else if (i > 0) {
      acc += distance(waypoints[i - 1], waypoints[i]);
    }
    cum[i] = acc;
  }
  return cum;
}

PlanarSearchResult run_planar_search(const Environment& env, const Frame& frame,
                                     const FramePoint& p0, const PlanarSearchConfig& cfg,
                                     const ValueFunction& f) {
  cfg.validate(env);
  if (std::abs(p0.y) > kResidualTol) {
    throw Error(ErrorCode::kInvalidStart, "start point is off the middle perpendicular plane");
  }
  if (p0.z < cfg.h_min - kGeomTol || p0.z > cfg.altitude_cap) {
    throw Error(ErrorCode::kInvalidStart, "start altitude outside [h_min, altitude_cap]");
  }
  const FramePoint start{p0.x, 0.0, p0.z};
  if (!env.double_los(start, frame)) {
    throw Error(ErrorCode::kInvalidStart, "start point is not double-LOS");
  }

  PlanarSearchResult out;
  Sweeper sweeper(env, frame, cfg, out);
  sweeper.sweep(start, +1);
  // Restart straight above the midpoint at the incumbent radius and sweep the
  // other way.
  sweeper.sweep({0.0, 0.0, std::max(sweeper.best_radius(), cfg.h_min)}, -1);

  out.d0 = critical_distance(out.best, frame);
  out.value = objective(f, out.best, frame);
  return out;
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  const std::vector<double> cum = trajectory.cumulative_length();
  out << "x,y,z,double_los,cum_length\n";
  char buf[160];
  for (std::size_t i = 0; i < trajectory.waypoints.size(); ++i) {
    const FramePoint& p = trajectory.waypoints[i];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%d,%.6f\n", p.x, p.y, p.z,
                  trajectory.double_los_flags[i] ? 1 : 0, cum[i]);
    out << buf;
  }
}

}  // namespace uavlos
