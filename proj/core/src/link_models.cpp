#include "uavlos/link_models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "uavlos/error.hpp"
#include "uavlos/rng.hpp"

namespace uavlos {

void RelayLinkModel::validate() const {
  if (!(bandwidth_hz > 0.0)) throw Error(ErrorCode::kConfiguration, "bandwidth must be positive");
  if (!(los.slope_db > 0.0) || !(nlos.slope_db > 0.0)) {
    throw Error(ErrorCode::kConfiguration, "path-loss slopes must be positive");
  }
}

void WptLinkModel::validate() const {
  if (!(efficiency > 0.0) || efficiency > 1.0) {
    throw Error(ErrorCode::kConfiguration, "efficiency must lie in (0, 1]");
  }
  if (!(exponent > 0.0)) throw Error(ErrorCode::kConfiguration, "exponent must be positive");
  if (!(tx_power_w > 0.0) || !(ref_gain > 0.0)) {
    throw Error(ErrorCode::kConfiguration, "power and reference gain must be positive");
  }
}

double path_loss(const RelayLinkModel& model, double d, bool los) {
  if (!(d > 0.0)) throw Error(ErrorCode::kDomain, "distance must be positive");
  const PathLossParams& pl = los ? model.los : model.nlos;
  return pl.intercept_db + pl.slope_db * std::log10(d) + pl.shadowing_db;
}

double capacity(const RelayLinkModel& model, double d, bool los) {
  const double rx_dbm = model.tx_power_dbm - path_loss(model, d, los);
  const double noise_dbm = model.noise_dbm_per_hz + 10.0 * std::log10(model.bandwidth_hz);
  return model.bandwidth_hz * std::log2(1.0 + db_to_ratio(rx_dbm - noise_dbm));
}

double wpt_power(const WptLinkModel& model, double d) {
  if (!(d >= 1.0)) throw Error(ErrorCode::kDomain, "distance below the 1 m reference");
  return model.efficiency * model.tx_power_w * model.ref_gain / std::pow(d, model.exponent);
}

ValueFunction value_function(const LinkModel& model) {
  return std::visit(
      [](const auto& m) -> ValueFunction {
        using T = std::decay_t<decltype(m)>;
        m.validate();
        if constexpr (std::is_same_v<T, RelayLinkModel>) {
          return [m](double d) { return capacity(m, d, true); };
        } else {
          return [m](double d) { return wpt_power(m, d); };
        }
      },
      model);
}

double link_value(const LinkModel& model, double d, bool los) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RelayLinkModel>) {
          return capacity(m, d, los);
        } else {
          return los ? wpt_power(m, d) : 0.0;
        }
      },
      model);
}

double objective(const ValueFunction& f, const FramePoint& p, const Frame& frame) {
  const LinkDistances ld = link_distances(p, frame);
  return std::min(f(ld.d1), f(ld.d2));
}

double los_probability(const StatLosParams& params, double altitude, double ground_range) {
  const double elevation =
      ground_range > 0.0 ? std::atan(altitude / ground_range) : std::numbers::pi / 2.0;
  return 1.0 / (1.0 + params.a * std::exp(-params.b * (elevation - params.a)));
}

double statistical_objective(const StatLosParams& params, const RelayLinkModel& relay,
                             const FramePoint& p, const Frame& frame) {
  double worst = -std::numeric_limits<double>::infinity();
  for (User u : {User::kFirst, User::kSecond}) {
    const FramePoint rel = p - frame.user(u);
    const double d = rel.norm();
    const double ground = std::sqrt(std::max(0.0, d * d - p.z * p.z));
    const double plos = los_probability(params, p.z, ground);
    const double avg = plos * path_loss(relay, d, true) + (1.0 - plos) * path_loss(relay, d, false);
    worst = std::max(worst, avg);
  }
  return worst;
}

namespace {

constexpr int kAngleBins = 18;
constexpr double kAMin = 1e-3;
constexpr double kAMax = 100.0;
constexpr double kBMax = 200.0;

struct Histogram {
  std::array<double, kAngleBins> count{};
  std::array<double, kAngleBins> los{};
  std::array<double, kAngleBins> center{};
};

double fit_error(const Histogram& h, const StatLosParams& p) {
  double err = 0.0;
  for (int k = 0; k < kAngleBins; ++k) {
    if (h.count[k] == 0.0) continue;
    const double model = 1.0 / (1.0 + p.a * std::exp(-p.b * (h.center[k] - p.a)));
    const double freq = h.los[k] / h.count[k];
    err += h.count[k] * (model - freq) * (model - freq);
  }
  return err;
}

}  // namespace

StatFitResult fit_statistical_params(const Environment& env, std::size_t n_samples,
                                     std::uint64_t seed) {
  Histogram h;
  const double bin_width = (std::numbers::pi / 2.0) / kAngleBins;
  for (int k = 0; k < kAngleBins; ++k) h.center[k] = (k + 0.5) * bin_width;

  Rng rng(seed);
  const Rect& b = env.bounds();
  std::size_t taken = 0;
  std::size_t los_total = 0;
  for (std::size_t attempt = 0; taken < n_samples && attempt < 50 * (n_samples + 1); ++attempt) {
    const Vec2 g{rng.uniform(b.xmin, b.xmax), rng.uniform(b.ymin, b.ymax)};
    const WorldPoint air{rng.uniform(b.xmin, b.xmax), rng.uniform(b.ymin, b.ymax),
                         env.h_min() + rng.uniform(0.0, 150.0)};
    if (env.inside_any_footprint(g)) continue;
    const WorldPoint ground{g.x, g.y, 0.0};
    const double range = (xy(air) - g).norm();
    const double elevation = range > 0.0 ? std::atan(air.z / range) : std::numbers::pi / 2.0;
    const int bin = std::min(kAngleBins - 1, static_cast<int>(elevation / bin_width));
    const bool los = env.los_visible(ground, air);
    h.count[bin] += 1.0;
    h.los[bin] += los ? 1.0 : 0.0;
    los_total += los ? 1 : 0;
    ++taken;
  }

  StatFitResult result;
  if (taken == 0 || los_total == taken) {
    result.params = {kAMin, 0.0};
    result.degenerate = true;
    result.residual = fit_error(h, result.params);
    return result;
  }
  if (los_total == 0) {
    result.params = {kAMax, 0.0};
    result.degenerate = true;
    result.residual = fit_error(h, result.params);
    return result;
  }

  // Coarse log grid, then a compass search in (log a, log b).
  StatLosParams best{1.0, 1.0};
  double best_err = fit_error(h, best);
  constexpr int kGrid = 48;
  for (int i = 0; i < kGrid; ++i) {
    const double a = kAMin * std::pow(kAMax / kAMin, i / double(kGrid - 1));
    for (int j = 0; j <= kGrid; ++j) {
      const double bb = j == 0 ? 0.0 : 1e-3 * std::pow(kBMax / 1e-3, (j - 1) / double(kGrid - 1));
      const double e = fit_error(h, {a, bb});
      if (e < best_err) {
        best_err = e;
        best = {a, bb};
      }
    }
  }
  double la = std::log(best.a);
  double lb = std::log(std::max(best.b, 1e-3));
  bool b_zero = best.b == 0.0;
  double stepsize = 0.25;
  while (stepsize > 1e-6) {
    bool improved = false;
    const double moves[4][2] = {{stepsize, 0}, {-stepsize, 0}, {0, stepsize}, {0, -stepsize}};
    for (const auto& mv : moves) {
      const double na = std::clamp(la + mv[0], std::log(kAMin), std::log(kAMax));
      const double nb = std::clamp(lb + mv[1], std::log(1e-3), std::log(kBMax));
      const StatLosParams cand{std::exp(na), (b_zero && mv[1] == 0.0) ? 0.0 : std::exp(nb)};
      const double e = fit_error(h, cand);
      if (e < best_err) {
        best_err = e;
        la = na;
        lb = nb;
        b_zero = cand.b == 0.0;
        best = cand;
        improved = true;
      }
    }
    if (!improved) stepsize *= 0.5;
  }
  result.params = best;
  result.residual = best_err;
  return result;
}

}  // namespace uavlos
