#pragma once

#include <cmath>
#include <numbers>

namespace soarplan {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Wrap an angle into [-pi, pi). Idempotent.
inline double normalize_angle(double angle) {
    double r = std::remainder(angle, kTwoPi);
    if (r >= kPi) r -= kTwoPi;
    return r;
}

/// Signed smallest difference a - b, in [-pi, pi).
inline double angle_difference(double a, double b) { return normalize_angle(a - b); }

/// |angle_difference(a, b)| in [0, pi].
inline double abs_angle_difference(double a, double b) {
    double d = std::fabs(a - b);
    if (d > kTwoPi) d = std::fabs(normalize_angle(d));
    return d > kPi ? kTwoPi - d : d;
}

}  // namespace soarplan
