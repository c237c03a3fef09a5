#pragma once

#include <numbers>

namespace tunnelkit::constants {

// SI values, CODATA 2018 (h, e and c are exact by definition of the SI).
inline constexpr double pi = std::numbers::pi;

inline constexpr double planck = 6.62607015e-34;           // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double ev_to_joule = elementary_charge;    // J per eV
inline constexpr double hbar = planck / (2.0 * pi);         // J s
inline constexpr double planck_ev = planck / ev_to_joule;   // eV s
inline constexpr double hbar_ev = hbar / ev_to_joule;       // eV s
inline constexpr double speed_of_light = 299792458.0;       // m/s
inline constexpr double electron_mass = 9.1093837015e-31;   // kg

}  // namespace tunnelkit::constants
