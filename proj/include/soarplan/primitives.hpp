#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "soarplan/angles.hpp"
#include "soarplan/dynamics.hpp"
#include "soarplan/random.hpp"

namespace soarplan {

enum class PrimitiveKind { Straight, Curve, Spiral, Spline };

std::string_view to_string(PrimitiveKind kind);

/// Segment timing shared by every primitive and by the continuous sampler.
struct PrimitiveConfig {
    double segment_duration = 10.0;  // T_s [s]
    int steps = 10;                  // N, even so splines split at N/2

    /// Throws std::invalid_argument.
    void validate() const;
    friend bool operator==(const PrimitiveConfig&, const PrimitiveConfig&) = default;
};

/// Discrete parameter sets the library is built from. Turn values are the
/// total heading change over one segment; the rate is turn / T_s.
namespace primitive_sets {
inline constexpr std::array<double, 2> kAirspeeds{10.0, 20.0};                         // [m/s]
inline constexpr std::array<double, 5> kFlightPathAnglesDeg{-45.0, -15.0, 0.0, 15.0, 45.0};
inline constexpr std::array<double, 6> kCurveTurnsDeg{-90.0, -60.0, -30.0, 30.0, 60.0, 90.0};
inline constexpr std::array<double, 8> kSpiralTurnsDeg{-1080.0, -720.0, -360.0, -180.0,
                                                       180.0,   360.0,  720.0,  1080.0};
inline constexpr std::array<double, 4> kSplineTurnsDeg{-90.0, -60.0, 60.0, 90.0};
inline constexpr std::size_t kLibrarySize = 174;
}  // namespace primitive_sets

struct MotionPrimitive {
    int id = 0;
    PrimitiveKind kind = PrimitiveKind::Straight;
    double airspeed = 0.0;           // [m/s]
    double first_half_turn = 0.0;    // [rad], heading change over the first half
    double second_half_turn = 0.0;   // [rad], heading change over the second half
    double flight_path_angle = 0.0;  // [rad]

    double total_turn() const { return first_half_turn + second_half_turn; }
    friend bool operator==(const MotionPrimitive&, const MotionPrimitive&) = default;
};

/// All 174 primitives in a fixed order: straights, curves, spirals, splines;
/// within a kind, airspeed-major then turn then flight-path angle. ids are the
/// positions in that order.
std::vector<MotionPrimitive> enumerate_primitives(const PrimitiveConfig& cfg);

/// Expands a primitive into N equal steps. Non-spline primitives hold
/// turn / T_s for the whole segment; splines fly each half at
/// half_turn / (T_s / 2).
ControlSequence to_control_sequence(const MotionPrimitive& p, const PrimitiveConfig& cfg);

/// Axis-aligned box of controls spanned by the primitive library.
struct ControlEnvelope {
    double min_airspeed = 10.0;
    double max_airspeed = 20.0;
    double max_turn_rate = 0.0;  // symmetric, [rad/s]
    double min_flight_path_angle = deg_to_rad(-45.0);
    double max_flight_path_angle = deg_to_rad(45.0);

    static ControlEnvelope for_config(const PrimitiveConfig& cfg);
    bool contains(const ControlInput& u, double tolerance = 1e-12) const;
};

/// A control sequence drawn by a sampler, tagged with its primitive id
/// (-1 for continuous draws).
struct SampledControl {
    const ControlSequence* sequence = nullptr;
    int primitive_id = -1;
};

/// Monte-Carlo control source for the planner's propagation step. One sampler
/// per planning run; not shared across threads.
class ControlSampler {
public:
    virtual ~ControlSampler() = default;
    /// The returned sequence stays valid until the next call.
    virtual SampledControl sample(Rng& rng) = 0;
    virtual std::string_view name() const = 0;
};

class PrimitiveSampler final : public ControlSampler {
public:
    /// Throws std::invalid_argument on an empty library.
    PrimitiveSampler(std::vector<MotionPrimitive> library, const PrimitiveConfig& cfg);

    SampledControl sample(Rng& rng) override;
    std::string_view name() const override { return "primitive"; }

    /// Uniform draw over the library.
    const MotionPrimitive& sample_primitive(Rng& rng) const;
    const std::vector<MotionPrimitive>& library() const { return library_; }
    const ControlSequence& sequence(int id) const { return sequences_.at(static_cast<std::size_t>(id)); }

private:
    std::vector<MotionPrimitive> library_;
    std::vector<ControlSequence> sequences_;
};

class ContinuousSampler final : public ControlSampler {
public:
    ContinuousSampler(const ControlEnvelope& envelope, const PrimitiveConfig& cfg);

    SampledControl sample(Rng& rng) override;
    std::string_view name() const override { return "continuous"; }

    /// A single control drawn uniformly from the envelope box.
    ControlInput sample_input(Rng& rng) const;
    /// The sequence the continuous planner flies for a given control.
    ControlSequence sequence_for(const ControlInput& u) const;

private:
    ControlEnvelope envelope_;
    PrimitiveConfig cfg_;
    ControlSequence current_;
};

/// Convenience wrapper returning a self-contained sequence.
ControlSequence sample_continuous(Rng& rng, const ControlEnvelope& envelope,
                                  const PrimitiveConfig& cfg);

}  // namespace soarplan
