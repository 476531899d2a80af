#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "uavlos/environment.hpp"

namespace uavlos {

/// Procedural block city: a square street grid whose blocks are split into
/// 2x2 lots, each holding at most one rectangular or L-shaped building.
struct CityGenParams {
  std::uint64_t seed = 1;
  Rect bounds{0.0, 0.0, 500.0, 500.0};
  double target_bcr = 0.3;
  double block_pitch = 50.0;
  double street_width = 10.0;
  double height_lo = 50.0;
  double height_hi = 80.0;
};

/// Deterministic for a fixed seed. Achieved coverage is within 0.05 of the
/// target; h_min is the tallest generated height. Throws kGenerationFailure
/// when the requested density does not fit the block layout.
Environment generate_city(const CityGenParams& params);

struct UserPair {
  WorldPoint u1;
  WorldPoint u2;
};

/// Ground user pairs outside every footprint with separation in
/// [min_sep, max_sep]. Throws kSamplingFailure when rejection sampling runs
/// out of attempts.
std::vector<UserPair> sample_user_pairs(const Environment& env, std::size_t n, double min_sep,
                                        double max_sep, std::uint64_t seed);

}  // namespace uavlos
