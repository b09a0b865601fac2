#pragma once

#include <numbers>

// Everything inside the library is SI with angular frequencies in rad/s.
// GHz only appears at the configuration / CSV boundary.
namespace metaline::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kGiga = 1e9;

constexpr double ghz_to_rad(double ghz) { return ghz * kTwoPi * kGiga; }
constexpr double rad_to_ghz(double rad_per_s) { return rad_per_s / (kTwoPi * kGiga); }

}  // namespace metaline::units
