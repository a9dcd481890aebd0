#include "soarplan/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "soarplan/angles.hpp"

namespace soarplan {

namespace {

bool finite(const State& s) {
    return std::isfinite(s.north) && std::isfinite(s.east) && std::isfinite(s.course) &&
           std::isfinite(s.height);
}

bool finite(const WindVector& w) {
    return std::isfinite(w.north) && std::isfinite(w.east) && std::isfinite(w.down);
}

// Derivative without argument checks; the integrator calls this in its inner loop.
StateRate rate(const State& s, const ControlInput& u, const WindVector& w) {
    const double horizontal = u.airspeed * std::cos(u.flight_path_angle);
    return {horizontal * std::cos(s.course) + w.north, horizontal * std::sin(s.course) + w.east,
            u.turn_rate, u.airspeed * std::sin(u.flight_path_angle) - w.down};
}

State advance(const State& s, const StateRate& r, double dt) {
    return {s.north + dt * r.d_north, s.east + dt * r.d_east, s.course + dt * r.d_course,
            s.height + dt * r.d_height};
}

// Same arithmetic as rate() with the step-constant airspeed terms and the
// course trig passed in.
StateRate rate(double horizontal, double vertical, double turn_rate, double cos_course,
               double sin_course, const WindVector& w) {
    return {horizontal * cos_course + w.north, horizontal * sin_course + w.east, turn_rate,
            vertical - w.down};
}

}  // namespace

bool ControlInput::valid() const {
    return std::isfinite(airspeed) && std::isfinite(turn_rate) &&
           std::isfinite(flight_path_angle) && airspeed > 0.0 &&
           std::abs(flight_path_angle) <= kPi / 2.0;
}

ControlSequence::ControlSequence(std::vector<ControlInput> inputs, double total_duration)
    : total_duration_(total_duration) {
    if (inputs.size() < 2) throw std::invalid_argument("control sequence needs at least 2 steps");
    if (!(total_duration > 0.0) || !std::isfinite(total_duration)) {
        throw std::invalid_argument("control sequence duration must be > 0");
    }
    const double dt = total_duration / static_cast<double>(inputs.size());
    steps_.reserve(inputs.size());
    for (const auto& u : inputs) {
        if (!u.valid()) throw std::invalid_argument("invalid control input in sequence");
        steps_.push_back({u, dt});
    }
}

ControlSequence ControlSequence::constant(const ControlInput& control, double total_duration,
                                          int steps) {
    if (steps < 2) throw std::invalid_argument("control sequence needs at least 2 steps");
    return ControlSequence(std::vector<ControlInput>(static_cast<std::size_t>(steps), control),
                           total_duration);
}

StateRate state_derivative(const State& s, const ControlInput& u, const WindVector& w) {
    if (!finite(s) || !finite(w) || !u.valid()) {
        throw std::invalid_argument("state_derivative: non-finite or invalid input");
    }
    return rate(s, u, w);
}

GroundVelocity ground_velocity(const State& s, const ControlInput& u, const WindVector& w) {
    const StateRate r = state_derivative(s, u, w);
    GroundVelocity g;
    g.velocity = {r.d_north, r.d_east, r.d_height};
    g.speed = std::sqrt(r.d_north * r.d_north + r.d_east * r.d_east + r.d_height * r.d_height);
    return g;
}

std::optional<TrajectorySegment> propagate(const State& start, const ControlSequence& controls,
                                           const WindField& field,
                                           const PropagationOptions& options) {
    if (options.substeps_per_step < 1) {
        throw std::invalid_argument("substeps_per_step must be positive");
    }
    if (controls.step_count() == 0) throw std::invalid_argument("empty control sequence");
    if (!finite(start)) return std::nullopt;

    TrajectorySegment seg;
    seg.controls = controls;
    seg.states.reserve(controls.step_count() + 1);
    seg.step_ground_distance.reserve(controls.step_count());

    State s = start;
    s.course = normalize_angle(s.course);
    seg.states.push_back({0.0, s});

    auto wind = [&field](const State& x) { return field.at(x.north, x.east, x.height); };

    const int substeps = options.substeps_per_step;
    for (std::size_t k = 0; k < controls.step_count(); ++k) {
        const ControlStep& step = controls.step(k);
        const ControlInput& u = step.control;
        const double h = step.duration / substeps;
        double distance = 0.0;
        const double horizontal = u.airspeed * std::cos(u.flight_path_angle);
        const double vertical = u.airspeed * std::sin(u.flight_path_angle);
        for (int i = 0; i < substeps; ++i) {
            // Course evolves independently of position, so stages 2 and 3
            // share one heading.
            const StateRate k1 =
                rate(horizontal, vertical, u.turn_rate, std::cos(s.course), std::sin(s.course), wind(s));
            const State s2 = advance(s, k1, 0.5 * h);
            const double cos_mid = std::cos(s2.course);
            const double sin_mid = std::sin(s2.course);
            const StateRate k2 = rate(horizontal, vertical, u.turn_rate, cos_mid, sin_mid, wind(s2));
            const State s3 = advance(s, k2, 0.5 * h);
            const StateRate k3 = rate(horizontal, vertical, u.turn_rate, cos_mid, sin_mid, wind(s3));
            const State s4 = advance(s, k3, h);
            const StateRate k4 =
                rate(horizontal, vertical, u.turn_rate, std::cos(s4.course), std::sin(s4.course), wind(s4));

            State next;
            next.north = s.north + h / 6.0 * (k1.d_north + 2.0 * k2.d_north + 2.0 * k3.d_north + k4.d_north);
            next.east = s.east + h / 6.0 * (k1.d_east + 2.0 * k2.d_east + 2.0 * k3.d_east + k4.d_east);
            next.course = normalize_angle(
                s.course + h / 6.0 * (k1.d_course + 2.0 * k2.d_course + 2.0 * k3.d_course + k4.d_course));
            next.height = s.height + h / 6.0 * (k1.d_height + 2.0 * k2.d_height + 2.0 * k3.d_height + k4.d_height);

            if (!finite(next) || next.height < options.height_floor) return std::nullopt;

            const double dn = next.north - s.north;
            const double de = next.east - s.east;
            const double dh = next.height - s.height;
            distance += std::sqrt(dn * dn + de * de + dh * dh);
            s = next;
        }
        const double t = static_cast<double>(k + 1) * step.duration;
        seg.states.push_back({t, s});
        seg.step_ground_distance.push_back(distance);
    }
    return seg;
}

}  // namespace soarplan
