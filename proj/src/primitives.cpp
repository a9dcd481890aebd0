#include "soarplan/primitives.hpp"

#include <cmath>
#include <stdexcept>

namespace soarplan {

std::string_view to_string(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::Straight: return "straight";
        case PrimitiveKind::Curve: return "curve";
        case PrimitiveKind::Spiral: return "spiral";
        case PrimitiveKind::Spline: return "spline";
    }
    return "unknown";
}

void PrimitiveConfig::validate() const {
    if (!(segment_duration > 0.0) || !std::isfinite(segment_duration)) {
        throw std::invalid_argument("segment_duration must be > 0");
    }
    if (steps < 2 || steps % 2 != 0) {
        throw std::invalid_argument("steps_per_segment must be even and >= 2");
    }
}

std::vector<MotionPrimitive> enumerate_primitives(const PrimitiveConfig& cfg) {
    using namespace primitive_sets;
    cfg.validate();

    std::vector<MotionPrimitive> out;
    out.reserve(kLibrarySize);
    auto add = [&out](PrimitiveKind kind, double v, double first, double second, double gamma) {
        MotionPrimitive p;
        p.id = static_cast<int>(out.size());
        p.kind = kind;
        p.airspeed = v;
        p.first_half_turn = first;
        p.second_half_turn = second;
        p.flight_path_angle = gamma;
        out.push_back(p);
    };
    // Non-spline kinds carry half the total turn in each half.
    auto add_uniform_turns = [&](PrimitiveKind kind, std::span<const double> turns_deg) {
        for (double v : kAirspeeds)
            for (double turn : turns_deg)
                for (double gamma : kFlightPathAnglesDeg)
                    add(kind, v, deg_to_rad(turn) / 2.0, deg_to_rad(turn) / 2.0, deg_to_rad(gamma));
    };

    const std::array<double, 1> zero_turn{0.0};
    add_uniform_turns(PrimitiveKind::Straight, zero_turn);
    add_uniform_turns(PrimitiveKind::Curve, kCurveTurnsDeg);
    add_uniform_turns(PrimitiveKind::Spiral, kSpiralTurnsDeg);
    for (double v : kAirspeeds)
        for (double first : kSplineTurnsDeg)
            for (double second : kSplineTurnsDeg)
                if (first != second)
                    add(PrimitiveKind::Spline, v, deg_to_rad(first), deg_to_rad(second), 0.0);
    return out;
}

ControlSequence to_control_sequence(const MotionPrimitive& p, const PrimitiveConfig& cfg) {
    cfg.validate();
    const double T = cfg.segment_duration;
    std::vector<ControlInput> inputs(static_cast<std::size_t>(cfg.steps));
    if (p.kind == PrimitiveKind::Spline) {
        const double half = T / 2.0;
        const std::size_t mid = inputs.size() / 2;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const double turn = i < mid ? p.first_half_turn : p.second_half_turn;
            inputs[i] = {p.airspeed, turn / half, p.flight_path_angle};
        }
    } else {
        const double rate = p.total_turn() / T;
        for (auto& u : inputs) u = {p.airspeed, rate, p.flight_path_angle};
    }
    return ControlSequence(std::move(inputs), T);
}

ControlEnvelope ControlEnvelope::for_config(const PrimitiveConfig& cfg) {
    using namespace primitive_sets;
    cfg.validate();
    ControlEnvelope env;
    env.min_airspeed = kAirspeeds.front();
    env.max_airspeed = kAirspeeds.back();
    env.max_turn_rate = deg_to_rad(kSpiralTurnsDeg.back()) / cfg.segment_duration;
    env.min_flight_path_angle = deg_to_rad(kFlightPathAnglesDeg.front());
    env.max_flight_path_angle = deg_to_rad(kFlightPathAnglesDeg.back());
    return env;
}

bool ControlEnvelope::contains(const ControlInput& u, double tolerance) const {
    return u.airspeed >= min_airspeed - tolerance && u.airspeed <= max_airspeed + tolerance &&
           std::abs(u.turn_rate) <= max_turn_rate + tolerance &&
           u.flight_path_angle >= min_flight_path_angle - tolerance &&
           u.flight_path_angle <= max_flight_path_angle + tolerance;
}

PrimitiveSampler::PrimitiveSampler(std::vector<MotionPrimitive> library, const PrimitiveConfig& cfg)
    : library_(std::move(library)) {
    if (library_.empty()) throw std::invalid_argument("primitive library is empty");
    sequences_.reserve(library_.size());
    for (std::size_t i = 0; i < library_.size(); ++i) {
        if (library_[i].id != static_cast<int>(i)) {
            throw std::invalid_argument("primitive ids must match library positions");
        }
        sequences_.push_back(to_control_sequence(library_[i], cfg));
    }
}

const MotionPrimitive& PrimitiveSampler::sample_primitive(Rng& rng) const {
    return library_[rng.index(library_.size())];
}

SampledControl PrimitiveSampler::sample(Rng& rng) {
    const MotionPrimitive& p = sample_primitive(rng);
    return {&sequences_[static_cast<std::size_t>(p.id)], p.id};
}

ContinuousSampler::ContinuousSampler(const ControlEnvelope& envelope, const PrimitiveConfig& cfg)
    : envelope_(envelope), cfg_(cfg) {
    cfg_.validate();
    if (!(envelope_.min_airspeed > 0.0) || envelope_.max_airspeed < envelope_.min_airspeed ||
        envelope_.max_turn_rate < 0.0 ||
        envelope_.max_flight_path_angle < envelope_.min_flight_path_angle) {
        throw std::invalid_argument("invalid control envelope");
    }
}

ControlInput ContinuousSampler::sample_input(Rng& rng) const {
    ControlInput u;
    u.airspeed = rng.uniform(envelope_.min_airspeed, envelope_.max_airspeed);
    u.turn_rate = rng.uniform(-envelope_.max_turn_rate, envelope_.max_turn_rate);
    u.flight_path_angle =
        rng.uniform(envelope_.min_flight_path_angle, envelope_.max_flight_path_angle);
    return u;
}

ControlSequence ContinuousSampler::sequence_for(const ControlInput& u) const {
    return ControlSequence::constant(u, cfg_.segment_duration, cfg_.steps);
}

SampledControl ContinuousSampler::sample(Rng& rng) {
    current_ = sequence_for(sample_input(rng));
    return {&current_, -1};
}

ControlSequence sample_continuous(Rng& rng, const ControlEnvelope& envelope,
                                  const PrimitiveConfig& cfg) {
    ContinuousSampler sampler(envelope, cfg);
    return sampler.sequence_for(sampler.sample_input(rng));
}

}  // namespace soarplan
