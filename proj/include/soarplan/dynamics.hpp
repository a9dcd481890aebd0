// Four-DOF kinematic point-mass model of a fixed-wing aircraft in wind.
//
//   dn/dt   = v_a cos(chi) cos(gamma) + w_n
//   de/dt   = v_a sin(chi) cos(gamma) + w_e
//   dchi/dt = chi_dot
//   dh/dt   = v_a sin(gamma) - w_d
//
// Height is stored positive-up throughout the library.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "soarplan/wind.hpp"

namespace soarplan {

struct State {
    double north = 0.0;   // [m]
    double east = 0.0;    // [m]
    double course = 0.0;  // [rad], kept in [-pi, pi)
    double height = 0.0;  // [m], positive up

    friend bool operator==(const State&, const State&) = default;
};

struct ControlInput {
    double airspeed = 0.0;           // u1 [m/s], > 0
    double turn_rate = 0.0;          // u2 [rad/s]
    double flight_path_angle = 0.0;  // u3 [rad], in [-pi/2, pi/2]

    bool valid() const;
    friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

struct ControlStep {
    ControlInput control;
    double duration = 0.0;  // [s]

    friend bool operator==(const ControlStep&, const ControlStep&) = default;
};

/// N equal-duration steps spanning a segment of length T_s.
class ControlSequence {
public:
    ControlSequence() = default;

    /// One step per input, each lasting total_duration / inputs.size().
    /// Throws std::invalid_argument on fewer than two inputs, a non-positive
    /// duration, or an invalid control.
    ControlSequence(std::vector<ControlInput> inputs, double total_duration);

    /// A single control held for total_duration over `steps` steps.
    static ControlSequence constant(const ControlInput& control, double total_duration,
                                    int steps);

    std::span<const ControlStep> steps() const { return steps_; }
    const ControlStep& step(std::size_t i) const { return steps_[i]; }
    std::size_t step_count() const { return steps_.size(); }
    double total_duration() const { return total_duration_; }
    double step_duration() const { return steps_.empty() ? 0.0 : steps_.front().duration; }

    friend bool operator==(const ControlSequence&, const ControlSequence&) = default;

private:
    std::vector<ControlStep> steps_;
    double total_duration_ = 0.0;
};

struct StateRate {
    double d_north = 0.0;
    double d_east = 0.0;
    double d_course = 0.0;
    double d_height = 0.0;
};

struct TimedState {
    double time = 0.0;
    State state;

    friend bool operator==(const TimedState&, const TimedState&) = default;
};

/// States at every control knot (N + 1 entries, the first at t = 0) together
/// with the controls that produced them.
struct TrajectorySegment {
    std::vector<TimedState> states;
    ControlSequence controls;
    /// Ground path length flown during each control step [m].
    std::vector<double> step_ground_distance;

    const State& start() const { return states.front().state; }
    const State& end() const { return states.back().state; }
    double duration() const { return controls.total_duration(); }

    friend bool operator==(const TrajectorySegment&, const TrajectorySegment&) = default;
};

/// Throws std::invalid_argument on non-finite input.
StateRate state_derivative(const State& s, const ControlInput& u, const WindVector& w);

struct GroundVelocity {
    std::array<double, 3> velocity{};  // north, east, up [m/s]
    double speed = 0.0;
};

GroundVelocity ground_velocity(const State& s, const ControlInput& u, const WindVector& w);

struct PropagationOptions {
    int substeps_per_step = 10;
    /// Segments dipping strictly below this height are rejected.
    double height_floor = 0.0;
};

/// Fixed-step RK4 integration of the control sequence through the wind field.
/// Wind is sampled at each RK stage position. Returns std::nullopt when the
/// height floor is breached or the state becomes non-finite.
std::optional<TrajectorySegment> propagate(const State& start, const ControlSequence& controls,
                                           const WindField& field,
                                           const PropagationOptions& options = {});

}  // namespace soarplan
