#include "sedsim/random.hpp"

#include <cmath>

#include "sedsim/constants.hpp"

namespace sedsim {

std::pair<double, double> standard_normal_pair(SplitMix64& gen) {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform01(gen);
  const double u2 = uniform01(gen);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = constants::two_pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace sedsim
