#pragma once

#include <vector>

namespace soarplan {

/// Inertial wind in north/east/down components [m/s]. Down is positive, so an
/// updraft has down < 0.
struct WindVector {
    double north = 0.0;
    double east = 0.0;
    double down = 0.0;

    friend WindVector operator+(const WindVector& a, const WindVector& b) {
        return {a.north + b.north, a.east + b.east, a.down + b.down};
    }
    friend WindVector operator-(const WindVector& a, const WindVector& b) {
        return {a.north - b.north, a.east - b.east, a.down - b.down};
    }
    friend bool operator==(const WindVector&, const WindVector&) = default;
};

/// Thermal updraft: a vertical band [base_height, top_height] with a Gaussian
/// radial profile w_up(r) = core_updraft * exp(-(r / radius)^2).
struct Thermal {
    double center_north = 0.0;  // [m]
    double center_east = 0.0;   // [m]
    double radius = 1.0;        // [m], > 0
    double core_updraft = 1.0;  // [m/s], > 0
    double base_height = 0.0;   // [m]
    double top_height = 1.0;    // [m], > base_height

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    /// Upward speed contributed at the given position (>= 0).
    double updraft_at(double north, double east, double height) const;

    friend bool operator==(const Thermal&, const Thermal&) = default;
};

/// Constant ambient wind plus a set of thermals. Immutable once built; reads
/// are safe from any thread.
struct WindField {
    WindVector ambient;
    std::vector<Thermal> thermals;

    WindVector at(double north, double east, double height) const;

    /// Largest upward speed the field can produce anywhere (ambient updraft
    /// plus every thermal core, assuming they overlap).
    double max_updraft() const;

    void validate() const;

    friend bool operator==(const WindField&, const WindField&) = default;
};

inline WindVector wind_at(const WindField& field, double north, double east, double height) {
    return field.at(north, east, height);
}

}  // namespace soarplan
