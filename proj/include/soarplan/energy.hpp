// Specific-energy-rate cost model.
//
// Lift and drag come from a fixed-coefficient polar; thrust is closed from the
// steady point-mass equations (constant airspeed and flight-path angle,
// constant wind), and fuel use follows from thrust power. The edge cost of a
// segment integrates -e_dot / v_g along the ground path.
#pragma once

#include <stdexcept>
#include <vector>

#include "soarplan/dynamics.hpp"
#include "soarplan/primitives.hpp"

namespace soarplan {

/// Airframe constants. Defaults approximate a small electric fixed-wing UAS;
/// they are not measured values.
struct AircraftParams {
    double mass = 5.74;             // [kg]
    double wing_area = 0.63;        // S [m^2]
    double lift_coefficient = 0.6;  // C_L0
    double zero_lift_drag = 0.03;   // C_D0
    double aspect_ratio = 10.0;     // AR
    double oswald = 0.9;            // e
    double eta_ec = 0.8;            // source-to-shaft efficiency
    double eta_p = 1.0;             // propeller efficiency
    double gravity = 9.81;          // [m/s^2]

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    friend bool operator==(const AircraftParams&, const AircraftParams&) = default;
};

inline constexpr double kSeaLevelDensity = 1.225;  // [kg/m^3]
inline constexpr double kMinDensityHeight = -500.0;
inline constexpr double kMaxBankAngle = 80.0 * 3.14159265358979323846 / 180.0;

/// ISA troposphere density. Throws std::out_of_range below -500 m.
double air_density(double height);

struct AeroForces {
    double lift = 0.0;               // [N]
    double drag = 0.0;               // [N]
    double dynamic_pressure = 0.0;   // q = 0.5 v^2 rho S, carries the wing area [N]
};

/// L = q C_L0, D = q (C_D0 + C_L0^2 / (pi AR e)) with q already including S.
/// Throws std::invalid_argument for airspeed <= 0.
AeroForces lift_drag(double airspeed, double height, const AircraftParams& p);

/// Coordinated-turn bank angle atan(v chi_dot / g), clamped to +-80 deg.
double bank_angle(double airspeed, double turn_rate, double gravity);

struct ForceSet {
    double lift = 0.0;
    double drag = 0.0;
    double thrust_x = 0.0;  // along the airspeed vector, clamped at 0
    double thrust_z = 0.0;
    double thrust = 0.0;    // sqrt(T_x^2 + T_z^2); no side force
    double dynamic_pressure = 0.0;
    double bank = 0.0;
};

/// Steady-flight thrust closure:
///   T_x = D + m g sin(gamma)
///   T_z = L - m g cos(gamma) / cos(phi)
/// A negative T_x (steep descent) is clamped to zero; there is no
/// regeneration. Throws std::invalid_argument for |phi| >= 90 deg.
ForceSet thrust(double airspeed, double flight_path_angle, double bank, double height,
                const AircraftParams& p);

/// e_f_dot = -T v_a / (m g eta_ec eta_p). Always <= 0; negative thrust is
/// treated as zero.
double fuel_rate(double thrust, double airspeed, const AircraftParams& p);

struct CostOptions {
    /// Added per metre of ground path so edge costs stay nonnegative.
    double cost_offset = 0.0;
    /// Steps with mean ground speed below this are degenerate [m/s].
    double min_ground_speed = 0.1;
};

/// Per-step breakdown of a segment's energy use.
struct StepEnergy {
    double e_dot = 0.0;             // g h_dot + e_f_dot
    double fuel_rate = 0.0;         // e_f_dot
    double height_rate_term = 0.0;  // g h_dot, h_dot realized over the step
    double ground_speed = 0.0;      // mean over the step
    double ground_distance = 0.0;
    double raw_cost = 0.0;          // (-e_dot / v_g) * distance
};

struct SegmentEnergy {
    double e_dot = 0.0;             // time-weighted mean
    double fuel_rate = 0.0;         // time-weighted mean
    double height_rate_term = 0.0;  // time-weighted mean
    double raw_cost = 0.0;
    double offset_cost = 0.0;       // raw_cost + cost_offset * ground_distance
    double ground_distance = 0.0;
    double duration = 0.0;
    std::vector<StepEnergy> steps;
};

/// Throws DegenerateSegment when a step's ground speed falls below
/// options.min_ground_speed.
SegmentEnergy segment_cost(const TrajectorySegment& seg, const AircraftParams& p,
                           const CostOptions& options = {});

class DegenerateSegment : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Smallest per-metre offset that keeps every reachable edge cost
/// nonnegative: an upper bound on g * climb / ground-path-length given the
/// envelope's climb rate, the field's strongest updraft and the slowest
/// horizontal ground speed the envelope can produce.
double cost_offset_bound(const WindField& field, const ControlEnvelope& envelope,
                         const PrimitiveConfig& cfg, int substeps_per_step, double gravity);

}  // namespace soarplan
