#pragma once

namespace sedsim::constants {

// SI 2019 exact values.
inline constexpr double planck_h = 6.62607015e-34;      // J s
inline constexpr double boltzmann_k = 1.380649e-23;     // J / K
inline constexpr double speed_of_light = 299792458.0;   // m / s

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

}  // namespace sedsim::constants
