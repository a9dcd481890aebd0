#include "soarplan/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "soarplan/angles.hpp"

namespace soarplan {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("aircraft.") + field + " must be > 0 (got " +
                                    std::to_string(value) + ")");
    }
}

}  // namespace

void AircraftParams::validate() const {
    require_positive(mass, "mass");
    require_positive(wing_area, "wing_area");
    require_positive(lift_coefficient, "cl0");
    require_positive(zero_lift_drag, "cd0");
    require_positive(aspect_ratio, "aspect_ratio");
    require_positive(oswald, "oswald");
    require_positive(eta_ec, "eta_ec");
    require_positive(eta_p, "eta_p");
    require_positive(gravity, "gravity");
    if (eta_ec > 1.0) throw std::invalid_argument("aircraft.eta_ec must be <= 1");
    if (eta_p > 1.0) throw std::invalid_argument("aircraft.eta_p must be <= 1");
}

double air_density(double height) {
    if (!(height >= kMinDensityHeight) || !std::isfinite(height)) {
        throw std::out_of_range("air_density: height below -500 m or non-finite");
    }
    return kSeaLevelDensity * std::pow(1.0 - 2.2558e-5 * height, 4.2559);
}

AeroForces lift_drag(double airspeed, double height, const AircraftParams& p) {
    if (!(airspeed > 0.0)) throw std::invalid_argument("lift_drag: airspeed must be > 0");
    AeroForces f;
    f.dynamic_pressure = 0.5 * airspeed * airspeed * air_density(height) * p.wing_area;
    const double induced =
        p.lift_coefficient * p.lift_coefficient / (kPi * p.aspect_ratio * p.oswald);
    f.lift = f.dynamic_pressure * p.lift_coefficient;
    f.drag = f.dynamic_pressure * (p.zero_lift_drag + induced);
    return f;
}

double bank_angle(double airspeed, double turn_rate, double gravity) {
    if (!(airspeed > 0.0)) throw std::invalid_argument("bank_angle: airspeed must be > 0");
    const double phi = std::atan(airspeed * turn_rate / gravity);
    return std::clamp(phi, -kMaxBankAngle, kMaxBankAngle);
}

ForceSet thrust(double airspeed, double flight_path_angle, double bank, double height,
                const AircraftParams& p) {
    if (!(std::abs(bank) < kPi / 2.0)) {
        throw std::invalid_argument("thrust: bank angle must be below 90 deg");
    }
    const AeroForces aero = lift_drag(airspeed, height, p);
    const double weight = p.mass * p.gravity;
    ForceSet f;
    f.lift = aero.lift;
    f.drag = aero.drag;
    f.dynamic_pressure = aero.dynamic_pressure;
    f.bank = bank;
    f.thrust_x = std::max(0.0, aero.drag + weight * std::sin(flight_path_angle));
    f.thrust_z = aero.lift - weight * std::cos(flight_path_angle) / std::cos(bank);
    f.thrust = std::hypot(f.thrust_x, f.thrust_z);
    return f;
}

double fuel_rate(double thrust, double airspeed, const AircraftParams& p) {
    const double t = std::max(0.0, thrust);
    return -t * airspeed / (p.mass * p.gravity * p.eta_ec * p.eta_p);
}

SegmentEnergy segment_cost(const TrajectorySegment& seg, const AircraftParams& p,
                           const CostOptions& options) {
    const std::size_t n = seg.controls.step_count();
    if (seg.states.size() != n + 1 || seg.step_ground_distance.size() != n) {
        throw std::invalid_argument("segment_cost: malformed trajectory segment");
    }
    SegmentEnergy out;
    out.steps.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const ControlStep& step = seg.controls.step(k);
        const State& a = seg.states[k].state;
        const State& b = seg.states[k + 1].state;
        const double dt = step.duration;

        StepEnergy e;
        e.ground_distance = seg.step_ground_distance[k];
        e.ground_speed = e.ground_distance / dt;
        if (!(e.ground_speed >= options.min_ground_speed)) {
            throw DegenerateSegment("segment_cost: ground speed " + std::to_string(e.ground_speed) +
                                    " m/s below minimum");
        }
        const ControlInput& u = step.control;
        const double phi = bank_angle(u.airspeed, u.turn_rate, p.gravity);
        const ForceSet forces = thrust(u.airspeed, u.flight_path_angle, phi, a.height, p);
        e.fuel_rate = fuel_rate(forces.thrust, u.airspeed, p);
        e.height_rate_term = p.gravity * (b.height - a.height) / dt;
        // Airspeed is constant within a step, so the kinetic term v_a dv_a/dt vanishes.
        e.e_dot = e.height_rate_term + e.fuel_rate;
        e.raw_cost = (-e.e_dot / e.ground_speed) * e.ground_distance;

        out.e_dot += e.e_dot * dt;
        out.fuel_rate += e.fuel_rate * dt;
        out.height_rate_term += e.height_rate_term * dt;
        out.raw_cost += e.raw_cost;
        out.ground_distance += e.ground_distance;
        out.duration += dt;
        out.steps.push_back(e);
    }
    if (out.duration > 0.0) {
        out.e_dot /= out.duration;
        out.fuel_rate /= out.duration;
        out.height_rate_term /= out.duration;
    }
    out.offset_cost = out.raw_cost + options.cost_offset * out.ground_distance;
    return out;
}

double cost_offset_bound(const WindField& field, const ControlEnvelope& envelope,
                         const PrimitiveConfig& cfg, int substeps_per_step, double gravity) {
    const double steepest = std::max(std::abs(envelope.min_flight_path_angle),
                                     std::abs(envelope.max_flight_path_angle));
    const double climb =
        envelope.max_airspeed * std::sin(std::min(envelope.max_flight_path_angle, kPi / 2.0)) +
        field.max_updraft();
    if (climb <= 0.0) return 0.0;
    // Heading sweeps at most this much within one integration substep; the
    // substep chord is then at least cos(sweep / 2) of the arc.
    const double dt = cfg.segment_duration / cfg.steps / substeps_per_step;
    const double sweep = std::min(kPi, envelope.max_turn_rate * dt);
    const double ambient_horizontal = std::hypot(field.ambient.north, field.ambient.east);
    const double slowest = std::max(
        0.0, envelope.min_airspeed * std::cos(steepest) * std::cos(sweep / 2.0) - ambient_horizontal);
    return gravity * climb / std::hypot(climb, slowest);
}

}  // namespace soarplan
