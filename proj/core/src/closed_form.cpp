#include "uavlos/closed_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "uavlos/error.hpp"

namespace uavlos {
namespace {

constexpr int kOuterSamples = 256;
constexpr int kGoldenIterations = 80;

// Stripe pair on the x > 0 side: x1 in [lo1, hi1] at h1 for user 1, x2 in
// [lo2, hi2] at h2 for user 2.
struct Problem {
  double lo1, hi1, h1;
  double lo2, hi2, h2;
  double half_l;
  double floor;

  double height(double x1, double x2) const {
    return std::max(2.0 * std::max(x2 * h1, x1 * h2) / (x1 + x2), floor);
  }

  // Squared critical distance of the double-ray optimum for feet x1, x2.
  double g(double x1, double x2) const {
    const double s = x1 + x2;
    const double xx = 2.0 * x1 * x2 / s;
    const double far = 2.0 * half_l * std::max(x1, x2) / s;
    const double z = height(x1, x2);
    return xx * xx + far * far + z * z;
  }

  // Exact minimizer over x2 for fixed x1. On every piece between the
  // breakpoints below g has the form (A x^2 + C)/(x1 + x)^2 + const, which
  // is unimodal with its stationary point among the candidates.
  std::pair<double, double> best_x2(double x1) const {
    const double l2 = 4.0 * half_l * half_l;
    std::array<double, 11> cand{
        lo2,
        hi2,
        x1,
        h1 > 0.0 ? x1 * h2 / h1 : lo2,
        4.0 * x1 * h2 * h2 / (4.0 * x1 * x1 + l2),
        l2 * x1 / (4.0 * x1 * x1 + 4.0 * h1 * h1),
        (l2 + 4.0 * h2 * h2) / (4.0 * x1),
        l2 / (4.0 * x1),
        2.0 * h1 > floor ? floor * x1 / (2.0 * h1 - floor) : lo2,
        floor > 0.0 ? x1 * (2.0 * h2 - floor) / floor : lo2,
        hi2,
    };
    double best_x = lo2;
    double best_g = std::numeric_limits<double>::infinity();
    for (double c : cand) {
      if (!std::isfinite(c)) continue;
      c = std::clamp(c, lo2, hi2);
      const double v = g(x1, c);
      if (v < best_g || (v == best_g && c < best_x)) {
        best_g = v;
        best_x = c;
      }
    }
    return {best_x, best_g};
  }

  std::pair<double, double> solve() const {
    if (hi1 - lo1 <= 0.0) return {lo1, best_x2(lo1).first};
    // The outer profile min_x2 g(x1, x2) need not be unimodal: sample densely,
    // then golden-section refine around the best sample.
    double best_x1 = lo1;
    double best_v = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = 0; k <= kOuterSamples; ++k) {
      const double x1 = lo1 + (hi1 - lo1) * k / kOuterSamples;
      const double v = best_x2(x1).second;
      if (v < best_v) {
        best_v = v;
        best_x1 = x1;
        best_k = k;
      }
    }
    const double cell = (hi1 - lo1) / kOuterSamples;
    double a = std::max(lo1, lo1 + (best_k - 1) * cell);
    double b = std::min(hi1, lo1 + (best_k + 1) * cell);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = best_x2(c).second;
    double fd = best_x2(d).second;
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = best_x2(c).second;
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = best_x2(d).second;
      }
    }
    const double mid = 0.5 * (a + b);
    const double fm = best_x2(mid).second;
    if (fm < best_v) {
      best_v = fm;
      best_x1 = mid;
    }
    return {best_x1, best_x2(best_x1).first};
  }
};

void check_stripe(const LosStripe& s) {
  if (std::abs(s.a.z - s.b.z) > kResidualTol || std::abs(s.a.y) > kResidualTol ||
      std::abs(s.b.y) > kResidualTol) {
    throw Error(ErrorCode::kUnsupportedConfiguration, "stripe is not a horizontal segment on y = 0");
  }
  if (!(s.a.x * s.b.x > 0.0)) {
    throw Error(ErrorCode::kUnsupportedConfiguration, "stripe crosses or touches x = 0");
  }
}

}  // namespace

FramePoint double_ray_optimum(const LosRay& r1, const LosRay& r2, const Frame& frame) {
  if (r1.user != User::kFirst || r2.user != User::kSecond) {
    throw Error(ErrorCode::kUnsupportedInput, "rays must belong to users 1 and 2");
  }
  const FramePoint& a1 = r1.foot;
  const FramePoint& a2 = r2.foot;
  if (!(a1.x * a2.x > 0.0)) {
    throw Error(ErrorCode::kGuardViolation, "ray feet are not on the same side of x = 0");
  }
  const FramePoint u1 = frame.user(User::kFirst);
  const FramePoint u2 = frame.user(User::kSecond);
  const double t = 2.0 * a2.x / (a1.x + a2.x);
  const double s = 2.0 * a1.x / (a1.x + a2.x);
  const FramePoint c1 = a1 * t + u1 * (1.0 - t);
  const FramePoint c2 = a2 * s + u2 * (1.0 - s);
  return c1.z > c2.z ? c1 : c2;
}

FramePoint double_stripe_optimum(const LosStripe& s1, const LosStripe& s2, const Frame& frame,
                                 double altitude_floor) {
  if (s1.user != User::kFirst || s2.user != User::kSecond) {
    throw Error(ErrorCode::kUnsupportedInput, "stripes must belong to users 1 and 2");
  }
  check_stripe(s1);
  check_stripe(s2);
  if (!(s1.a.x * s2.a.x > 0.0)) {
    throw Error(ErrorCode::kUnsupportedConfiguration, "stripes lie on opposite sides of x = 0");
  }
  const double sign = s1.a.x > 0.0 ? 1.0 : -1.0;
  const Problem pb{std::min(std::abs(s1.a.x), std::abs(s1.b.x)),
                   std::max(std::abs(s1.a.x), std::abs(s1.b.x)),
                   s1.height(),
                   std::min(std::abs(s2.a.x), std::abs(s2.b.x)),
                   std::max(std::abs(s2.a.x), std::abs(s2.b.x)),
                   s2.height(),
                   0.5 * frame.separation(),
                   altitude_floor};
  const auto [x1, x2] = pb.solve();
  const double s = x1 + x2;
  return {sign * 2.0 * x1 * x2 / s, pb.half_l * (x2 - x1) / s, pb.height(x1, x2)};
}

std::vector<PairSolution> solve_interval_pairs(std::span<const LosStripe> i1,
                                               std::span<const LosStripe> i2, const Frame& frame,
                                               double altitude_floor) {
  std::vector<PairSolution> out;
  for (std::size_t a = 0; a < i1.size(); ++a) {
    for (std::size_t b = 0; b < i2.size(); ++b) {
      if (!(i1[a].a.x * i2[b].a.x > 0.0)) continue;
      const FramePoint p = double_stripe_optimum(i1[a], i2[b], frame, altitude_floor);
      out.push_back({p, critical_distance(p, frame), a, b});
    }
  }
  std::sort(out.begin(), out.end(), [](const PairSolution& l, const PairSolution& r) {
    return std::tie(l.d0, l.point.x, l.point.y, l.point.z, l.i1, l.i2) <
           std::tie(r.d0, r.point.x, r.point.y, r.point.z, r.i1, r.i2);
  });
  return out;
}

FramePoint best_over_intervals(std::span<const LosStripe> i1, std::span<const LosStripe> i2,
                               const Frame& frame, double altitude_floor) {
  if (i1.empty() || i2.empty()) {
    throw Error(ErrorCode::kNoCandidate, "an interval set is empty");
  }
  const std::vector<PairSolution> sols = solve_interval_pairs(i1, i2, frame, altitude_floor);
  if (sols.empty()) {
    throw Error(ErrorCode::kNoCandidate, "no stripe pair lies on a common side");
  }
  return sols.front().point;
}

}  // namespace uavlos
