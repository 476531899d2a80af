#include "uavlos/multistage_search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <tuple>

#include "uavlos/error.hpp"

namespace uavlos {
namespace {

constexpr double kSplitEps = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Range = std::pair<double, double>;

std::vector<Range> merge_ranges(std::vector<Range> v) {
  std::sort(v.begin(), v.end());
  std::vector<Range> out;
  for (const Range& r : v) {
    if (!out.empty() && r.first <= out.back().second + kGeomTol) {
      out.back().second = std::max(out.back().second, r.second);
    } else {
      out.push_back(r);
    }
  }
  return out;
}

// Closed range minus a set of closed ranges; slivers left by a cut are dropped.
std::vector<Range> subtract_ranges(Range base, const std::vector<Range>& remove) {
  std::vector<Range> pieces{base};
  for (const Range& cut : remove) {
    std::vector<Range> next;
    for (const Range& p : pieces) {
      if (cut.second < p.first || cut.first > p.second) {
        next.push_back(p);
        continue;
      }
      if (cut.first - p.first > kGeomTol) next.push_back({p.first, cut.first});
      if (p.second - cut.second > kGeomTol) next.push_back({cut.second, p.second});
    }
    pieces = std::move(next);
  }
  return pieces;
}

// Lattice k*step inside [lo, hi] plus both ends.
std::vector<double> lattice(double lo, double hi, double step) {
  std::vector<double> xs;
  xs.push_back(lo);
  const auto k0 = static_cast<long>(std::ceil(lo / step));
  const auto k1 = static_cast<long>(std::floor(hi / step));
  for (long k = k0; k <= k1; ++k) {
    const double x = k * step;
    if (x - xs.back() > kGeomTol) xs.push_back(x);
  }
  if (hi - xs.back() > kGeomTol) xs.push_back(hi);
  return xs;
}

// Maximal LOS runs over sampled positions, split at x = 0 so that every
// piece keeps one sign.
std::vector<Range> los_runs(const std::vector<double>& xs, const std::vector<char>& los) {
  std::vector<Range> runs;
  std::size_t i = 0;
  while (i < xs.size()) {
    if (!los[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < xs.size() && los[j + 1]) ++j;
    const double a = xs[i];
    const double b = xs[j];
    if (a <= 0.0) runs.push_back({std::min(a, -kSplitEps), std::min(b, -kSplitEps)});
    if (b >= 0.0) runs.push_back({std::max(a, kSplitEps), std::max(b, kSplitEps)});
    i = j + 1;
  }
  return runs;
}

double segment_length(const std::pair<FramePoint, FramePoint>& s) {
  return distance(s.first, s.second);
}

// Greedy nearest-endpoint tour over the segments, starting at `pos`. Returns
// the connection length and leaves `pos` at the end of the tour.
double connect_segments(const std::vector<std::pair<FramePoint, FramePoint>>& segs,
                        FramePoint& pos) {
  std::vector<char> used(segs.size(), 0);
  double total = 0.0;
  for (std::size_t n = 0; n < segs.size(); ++n) {
    std::size_t best = 0;
    bool flip = false;
    double best_d = kInf;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      if (used[k]) continue;
      const double d1 = distance(pos, segs[k].first);
      const double d2 = distance(pos, segs[k].second);
      if (d1 < best_d) {
        best_d = d1;
        best = k;
        flip = false;
      }
      if (d2 < best_d) {
        best_d = d2;
        best = k;
        flip = true;
      }
    }
    used[best] = 1;
    total += best_d;
    pos = flip ? segs[best].first : segs[best].second;
  }
  return total;
}

}  // namespace

double lambert_w(double x) {
  if (x < 0.0) throw Error(ErrorCode::kDomain, "lambert_w is evaluated for x >= 0 only");
  if (x == 0.0) return 0.0;
  double w = x < 1.0 ? x : std::log(x) - std::log(std::log(x) + 1.0) + 0.5;
  if (w <= 0.0) w = 0.5;
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double step = (w * ew - x) / (ew * (w + 1.0));
    w -= step;
    if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

int optimal_stage_count(double h0, double delta) {
  if (!(h0 > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorCode::kDomain, "h0 and delta must be positive");
  }
  const double m = lambert_w(h0 * std::numbers::ln2 / delta) / std::numbers::ln2;
  return std::max(1, static_cast<int>(std::lround(m)));
}

double gap_bound(double d0_tilde, double delta_eff, double L, double h_min) {
  if (d0_tilde < h_min) throw Error(ErrorCode::kDomain, "critical distance below h_min");
  return 2.0 * delta_eff * std::sqrt(d0_tilde * d0_tilde - h_min * h_min) / L;
}

double StagePlan::spacing(int m) const { return std::ldexp(delta, stages - m); }

SweepResult sweep_segment(const Environment& env, const Frame& frame, double h,
                          std::pair<double, double> x_range, const SweepConfig& cfg, bool user1,
                          bool user2) {
  if (!(h > 0.0)) throw Error(ErrorCode::kDomain, "sweep altitude must be positive");
  if (!(x_range.first <= x_range.second)) throw Error(ErrorCode::kDomain, "empty x range");
  if (!(cfg.lattice_step > 0.0)) throw Error(ErrorCode::kDomain, "lattice step must be positive");
  const double L = frame.separation();
  const double H = cfg.h_min;
  SweepResult out;

  auto clip = [&](double extent_sq, double scale) -> std::pair<double, double> {
    double lo = x_range.first * scale;
    double hi = x_range.second * scale;
    if (cfg.d0_ref > 0.0) {
      const double ext = extent_sq >= 0.0 ? std::sqrt(extent_sq) : -1.0;
      lo = std::max(lo, -ext);
      hi = std::min(hi, ext);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw Error(ErrorCode::kDomain, "unbounded sweep without a reference distance");
    }
    return {lo, hi};
  };

  if (h >= H - kGeomTol) {
    const double d0 = cfg.d0_ref;
    const auto [lo, hi] = clip(d0 * d0 - 0.25 * L * L - h * h, 1.0);
    if (lo > hi) return out;
    const std::vector<double> xs = lattice(lo, hi, cfg.lattice_step);
    std::vector<char> los1(xs.size(), 0), los2(xs.size(), 0);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const FramePoint p{xs[k], 0.0, h};
      if (user1) los1[k] = env.los_to_user(p, User::kFirst, frame);
      if (user2) los2[k] = env.los_to_user(p, User::kSecond, frame);
    }
    out.segments.push_back({{lo, 0.0, h}, {hi, 0.0, h}});
    if (user1) {
      for (const Range& r : los_runs(xs, los1)) {
        out.stripes.push_back({{r.first, 0.0, h}, {r.second, 0.0, h}, User::kFirst});
      }
    }
    if (user2) {
      for (const Range& r : los_runs(xs, los2)) {
        out.stripes.push_back({{r.first, 0.0, h}, {r.second, 0.0, h}, User::kSecond});
      }
    }
    return out;
  }

  // Below the lowest altitude: fly the central projection of the line on the
  // plane z = H, one line per user.
  const double tau = H / h;
  const double d0 = cfg.d0_ref;
  for (User u : {User::kFirst, User::kSecond}) {
    if ((u == User::kFirst && !user1) || (u == User::kSecond && !user2)) continue;
    const double y = (u == User::kFirst ? 0.5 : -0.5) * L * (tau - 1.0);
    const auto [lo, hi] = clip(d0 * d0 - H * H - 0.25 * L * L * tau * tau, tau);
    if (lo > hi) continue;
    const std::vector<double> xs = lattice(lo, hi, cfg.lattice_step);
    std::vector<char> los(xs.size(), 0);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      los[k] = env.los_to_user({xs[k], y, H}, u, frame);
    }
    out.segments.push_back({{lo, y, H}, {hi, y, H}});
    for (const Range& r : los_runs(xs, los)) {
      FramePoint a = colinear_map_to_s({r.first, y, H}, u, frame);
      FramePoint b = colinear_map_to_s({r.second, y, H}, u, frame);
      a.z = h;
      b.z = h;
      out.stripes.push_back({a, b, u});
    }
  }
  return out;
}

MultistageResult run_multistage(const Environment& env, const Frame& frame, const FramePoint& p0,
                                const MultistageConfig& cfg) {
  if (!(cfg.delta > 0.0)) throw Error(ErrorCode::kConfiguration, "delta must be positive");
  if (cfg.stages < 1) throw Error(ErrorCode::kConfiguration, "stage count must be at least 1");
  if (cfg.h_min < env.max_height()) {
    throw Error(ErrorCode::kConfiguration, "h_min is below the tallest building");
  }
  if (p0.z < cfg.h_min - kGeomTol || !env.double_los(p0, frame)) {
    throw Error(ErrorCode::kInvalidStart, "start point is not a permissible double-LOS point");
  }
  const double L = frame.separation();
  const double H = cfg.h_min;
  const double step = cfg.lattice_step > 0.0 ? cfg.lattice_step : std::min(cfg.delta, 5.0);
  const int M = cfg.stages;

  MultistageResult res;
  res.best = p0;
  res.d0 = critical_distance(p0, frame);
  const StagePlan plan{M, cfg.delta, std::sqrt(std::max(0.0, res.d0 * res.d0 - 0.25 * L * L))};
  std::vector<StoredStripe>& store = res.intervals;

  // Line key: 0 for the line on y = 0, otherwise the user whose projected
  // line on z = H was flown.
  using LineKey = std::pair<long, int>;
  std::map<LineKey, std::vector<Range>> swept;
  FramePoint pos = p0;

  if (cfg.diagnostics) {
    *cfg.diagnostics << "stage,lines,intervals_found,intervals_pruned,intervals_alive,"
                        "incumbent_d0,gap_bound,bounded_regime,swept_length,connection_length\n";
  }

  for (int m = 1; m <= M; ++m) {
    const double spacing = plan.spacing(m);
    const long unit = 1L << (M - m);
    const double hpm = h_prime_min(res.d0, L, H);
    auto altitude = [&](long level) { return plan.h0 - static_cast<double>(level) * cfg.delta; };
    auto usable = [&](long level) {
      const double h = altitude(level);
      return h > 0.0 && h >= hpm - kGeomTol;
    };

    // Requested ranges per line, before merging.
    std::map<LineKey, std::vector<Range>> requests;
    if (m == 1) {
      for (long level = 0; usable(level); level += unit) {
        if (altitude(level) >= H - kGeomTol) {
          requests[{level, 0}].push_back({-kInf, kInf});
        } else {
          requests[{level, 1}].push_back({-kInf, kInf});
          requests[{level, 2}].push_back({-kInf, kInf});
        }
      }
    } else {
      for (const StoredStripe& s : store) {
        if (!s.alive) continue;
        const long level = s.level + unit;
        if (!usable(level)) continue;
        const int user = static_cast<int>(s.stripe.user);
        const int kind = altitude(level) >= H - kGeomTol ? 0 : user;
        std::vector<Range> covered = swept[{level, kind}];
        for (const StoredStripe& o : store) {
          if (o.stripe.user == s.stripe.user && o.level >= level) {
            covered.push_back({o.stripe.x_lo(), o.stripe.x_hi()});
          }
        }
        for (const Range& r : subtract_ranges({s.stripe.x_lo(), s.stripe.x_hi()}, covered)) {
          requests[{level, kind}].push_back(r);
        }
      }
    }

    StageDiagnostics diag;
    diag.stage = m;
    std::vector<std::pair<FramePoint, FramePoint>> segments;
    const SweepConfig sc{H, step, res.d0};
    for (auto& [key, ranges] : requests) {
      const auto [level, kind] = key;
      for (const Range& r : merge_ranges(ranges)) {
        SweepResult sr = sweep_segment(env, frame, altitude(level), r, sc, kind != 2, kind != 1);
        swept[key].push_back(r);
        ++diag.lines;
        for (const auto& seg : sr.segments) segments.push_back(seg);
        for (const LosStripe& st : sr.stripes) store.push_back({st, level, m, true});
        diag.intervals_found += sr.stripes.size();
      }
    }
    for (const auto& seg : segments) diag.swept_length += segment_length(seg);
    diag.connection_length = connect_segments(segments, pos);

    // Candidates from all live stripe pairs.
    std::vector<std::size_t> idx1, idx2;
    std::vector<LosStripe> set1, set2;
    for (std::size_t k = 0; k < store.size(); ++k) {
      if (!store[k].alive) continue;
      if (store[k].stripe.user == User::kFirst) {
        idx1.push_back(k);
        set1.push_back(store[k].stripe);
      } else {
        idx2.push_back(k);
        set2.push_back(store[k].stripe);
      }
    }
    const std::vector<PairSolution> sols = solve_interval_pairs(set1, set2, frame, H);
    for (const PairSolution& s : sols) {
      if (s.d0 >= res.d0) break;
      if (env.double_los(s.point, frame)) {
        res.best = s.point;
        res.d0 = s.d0;
        break;
      }
    }

    if (cfg.prune) {
      std::vector<double> single(store.size(), kInf);
      for (const PairSolution& s : sols) {
        single[idx1[s.i1]] = std::min(single[idx1[s.i1]], s.d0);
        single[idx2[s.i2]] = std::min(single[idx2[s.i2]], s.d0);
      }
      for (std::size_t k = 0; k < store.size(); ++k) {
        if (!store[k].alive) continue;
        const double dk = single[k];
        if (!std::isfinite(dk) || dk - res.d0 > gap_bound(dk, spacing, L, H)) {
          store[k].alive = false;
          ++diag.intervals_pruned;
        }
      }
    }
    for (const StoredStripe& s : store) diag.intervals_alive += s.alive ? 1 : 0;
    diag.incumbent_d0 = res.d0;
    diag.gap_bound = gap_bound(res.d0, spacing, L, H);
    diag.bounded_regime = res.d0 <= std::numbers::sqrt2 * L / 2.0;
    res.swept_length += diag.swept_length;
    res.connection_length += diag.connection_length;
    res.stages.push_back(diag);

    if (cfg.diagnostics) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%d,%zu,%zu,%zu,%zu,%.6f,%.6f,%d,%.6f,%.6f\n", diag.stage,
                    diag.lines, diag.intervals_found, diag.intervals_pruned, diag.intervals_alive,
                    diag.incumbent_d0, diag.gap_bound, diag.bounded_regime ? 1 : 0,
                    diag.swept_length, diag.connection_length);
      *cfg.diagnostics << buf;
    }
  }
  res.search_length = res.swept_length + res.connection_length;
  return res;
}

}  // namespace uavlos
