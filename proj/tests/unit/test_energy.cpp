#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "soarplan/config.hpp"
#include "soarplan/energy.hpp"
#include "support/support.hpp"

using namespace soarplan;
using soarplan::testing::Gen;

namespace {

constexpr double kNoFloor = -std::numeric_limits<double>::infinity();
const AircraftParams kAircraft{};
const PrimitiveConfig kCfg{};

TrajectorySegment fly(const State& s0, const ControlSequence& seq, const WindField& field = {}) {
    auto seg = propagate(s0, seq, field, {10, kNoFloor});
    REQUIRE(seg.has_value());
    return *seg;
}

TrajectorySegment fly(const State& s0, const ControlInput& u, const WindField& field = {}) {
    return fly(s0, ControlSequence::constant(u, kCfg.segment_duration, kCfg.steps), field);
}

}  // namespace

TEST_CASE("ISA density") {
    CHECK(air_density(0.0) == doctest::Approx(1.225).epsilon(1e-12));
    CHECK(air_density(1000.0) == doctest::Approx(1.1117).epsilon(1e-4));
    CHECK(air_density(1000.0) == doctest::Approx(1.225 * std::pow(1.0 - 0.022558, 4.2559)).epsilon(1e-14));
    for (double h = -500.0; h < 5000.0; h += 37.0) CHECK(air_density(h) > air_density(h + 37.0));
    CHECK_NOTHROW(air_density(-500.0));
    CHECK_THROWS_AS(air_density(-500.1), std::out_of_range);
    CHECK_THROWS_AS(air_density(std::nan("")), std::out_of_range);
}

TEST_CASE("lift and drag with q carrying the wing area") {
    const AeroForces f = lift_drag(20.0, 0.0, kAircraft);
    const double q = 0.5 * 20.0 * 20.0 * 1.225 * 0.63;
    CHECK(f.dynamic_pressure == doctest::Approx(q).epsilon(1e-14));
    CHECK(f.lift == doctest::Approx(92.61).epsilon(1e-12));
    CHECK(f.drag == doctest::Approx(q * (0.03 + 0.36 / (kPi * 9.0))).epsilon(1e-14));
    CHECK(f.drag == doctest::Approx(6.5957).epsilon(1e-4));
    CHECK_THROWS_AS(lift_drag(0.0, 0.0, kAircraft), std::invalid_argument);
    CHECK_THROWS_AS(lift_drag(-1.0, 0.0, kAircraft), std::invalid_argument);
}

TEST_CASE("doubling airspeed quadruples lift and drag") {
    Gen gen(1);
    for (int i = 0; i < 100; ++i) {
        const double v = gen.uniform(1.0, 30.0);
        const double h = gen.uniform(0.0, 3000.0);
        const AeroForces a = lift_drag(v, h, kAircraft);
        const AeroForces b = lift_drag(2.0 * v, h, kAircraft);
        CHECK(b.lift == doctest::Approx(4.0 * a.lift).epsilon(1e-14));
        CHECK(b.drag == doctest::Approx(4.0 * a.drag).epsilon(1e-14));
    }
}

TEST_CASE("coordinated-turn bank angle") {
    CHECK(bank_angle(10.0, 0.0, 9.81) == 0.0);
    const double phi = bank_angle(10.0, deg_to_rad(9.0), 9.81);
    CHECK(rad_to_deg(phi) == doctest::Approx(9.097).epsilon(1e-4));
    CHECK(bank_angle(10.0, -deg_to_rad(9.0), 9.81) == -phi);
    // 20 m/s at 108 deg/s asks for about 75 deg; 40 m/s would need more than 80.
    CHECK(rad_to_deg(bank_angle(20.0, deg_to_rad(108.0), 9.81)) < 80.0);
    CHECK(bank_angle(40.0, deg_to_rad(108.0), 9.81) == doctest::Approx(kMaxBankAngle));
    CHECK(bank_angle(40.0, -deg_to_rad(108.0), 9.81) == doctest::Approx(-kMaxBankAngle));
}

TEST_CASE("thrust closure") {
    const double mg = kAircraft.mass * kAircraft.gravity;
    SUBCASE("level, wings level: exact") {
        const ForceSet f = thrust(20.0, 0.0, 0.0, 0.0, kAircraft);
        CHECK(f.thrust_x == f.drag);
        CHECK(f.thrust_z == f.lift - mg);
        CHECK(f.thrust == std::hypot(f.thrust_x, f.thrust_z));
        CHECK(f.dynamic_pressure >= 0.0);
    }
    SUBCASE("vertical climb") {
        const ForceSet f = thrust(20.0, kPi / 2.0, 0.0, 0.0, kAircraft);
        CHECK(f.thrust_x == doctest::Approx(f.drag + mg).epsilon(1e-14));
        CHECK(f.thrust_z == doctest::Approx(f.lift).epsilon(1e-14));
    }
    SUBCASE("15 degree climb") {
        const ForceSet f = thrust(20.0, deg_to_rad(15.0), 0.0, 0.0, kAircraft);
        const AeroForces a = lift_drag(20.0, 0.0, kAircraft);
        CHECK(f.thrust_x == doctest::Approx(a.drag + mg * std::sin(deg_to_rad(15.0))).epsilon(1e-14));
        CHECK(f.thrust_z == doctest::Approx(a.lift - mg * std::cos(deg_to_rad(15.0))).epsilon(1e-14));
    }
    SUBCASE("steep descent clamps T_x at zero") {
        const ForceSet f = thrust(10.0, deg_to_rad(-45.0), 0.0, 0.0, kAircraft);
        CHECK(f.drag - mg * std::sin(deg_to_rad(45.0)) < 0.0);
        CHECK(f.thrust_x == 0.0);
        CHECK(f.thrust == doctest::Approx(std::abs(f.thrust_z)));
    }
    SUBCASE("bank at 90 degrees is rejected") {
        CHECK_THROWS_AS(thrust(20.0, 0.0, kPi / 2.0, 0.0, kAircraft), std::invalid_argument);
    }
}

TEST_CASE("fuel rate") {
    CHECK(fuel_rate(0.0, 10.0, kAircraft) == 0.0);
    AircraftParams p;
    p.mass = 5.0;
    CHECK(fuel_rate(10.0, 10.0, p) == doctest::Approx(-2.548).epsilon(1e-3));
    CHECK(fuel_rate(10.0, 10.0, p) == doctest::Approx(-100.0 / (5.0 * 9.81 * 0.8)).epsilon(1e-14));
    CHECK(AircraftParams{}.eta_ec == 0.8);
    CHECK(AircraftParams{}.eta_p == 1.0);
    CHECK(fuel_rate(-3.0, 10.0, kAircraft) == 0.0);

    Gen gen(2);
    for (int i = 0; i < 1000; ++i) {
        const ControlInput u = gen.control();
        const double phi = bank_angle(u.airspeed, u.turn_rate, kAircraft.gravity);
        const ForceSet f = thrust(u.airspeed, u.flight_path_angle, phi, gen.uniform(0, 2000), kAircraft);
        CHECK(fuel_rate(f.thrust, u.airspeed, kAircraft) <= 0.0);
    }
}

TEST_CASE("aircraft validation names the field") {
    AircraftParams p;
    p.eta_ec = 1.2;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("eta_ec"), std::invalid_argument);
    p = {};
    p.wing_area = 0.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("wing_area"), std::invalid_argument);
    CHECK_NOTHROW(AircraftParams{}.validate());
}

TEST_CASE("segment cost sign structure") {
    SUBCASE("level straight flight in still air costs energy") {
        const auto e = segment_cost(fly({0, 0, 0, 100}, {15, 0, 0}), kAircraft);
        CHECK(e.height_rate_term == 0.0);
        CHECK(e.e_dot < 0.0);
        CHECK(e.e_dot == doctest::Approx(e.fuel_rate));
        CHECK(e.raw_cost > 0.0);
        CHECK(e.ground_distance == doctest::Approx(150.0).epsilon(1e-12));
        CHECK(e.duration == doctest::Approx(10.0));
    }
    SUBCASE("a strong updraft harvests energy") {
        WindField field;
        field.thermals.push_back({0, 0, 1000, 6, 0, 2000});
        const auto e = segment_cost(fly({0, 0, 0, 100}, {10, 0, 0}, field), kAircraft);
        CHECK(e.height_rate_term > -e.fuel_rate);
        CHECK(e.e_dot > 0.0);
        CHECK(e.raw_cost < 0.0);
    }
}

TEST_CASE("segment cost matches a per-step oracle") {
    Gen gen(3);
    for (int trial = 0; trial < 50; ++trial) {
        const WindField field = gen.field(2);
        State s0 = gen.state();
        s0.height = 800.0;
        const auto seg = fly(s0, gen.sequence(), field);
        const auto e = segment_cost(seg, kAircraft);
        double raw = 0.0;
        for (std::size_t k = 0; k < seg.controls.step_count(); ++k) {
            const ControlInput& u = seg.controls.step(k).control;
            const double dt = seg.controls.step(k).duration;
            const double h0 = seg.states[k].state.height;
            const double h1 = seg.states[k + 1].state.height;
            const double rho = 1.225 * std::pow(1.0 - 2.2558e-5 * h0, 4.2559);
            const double q = 0.5 * u.airspeed * u.airspeed * rho * kAircraft.wing_area;
            const double L = q * 0.6;
            const double D = q * (0.03 + 0.36 / (kPi * 9.0));
            const double mg = kAircraft.mass * kAircraft.gravity;
            const double phi = std::clamp(std::atan(u.airspeed * u.turn_rate / 9.81), -kMaxBankAngle, kMaxBankAngle);
            const double tx = std::max(0.0, D + mg * std::sin(u.flight_path_angle));
            const double tz = L - mg * std::cos(u.flight_path_angle) / std::cos(phi);
            const double ef = -std::hypot(tx, tz) * u.airspeed / (mg * 0.8);
            const double edot = 9.81 * (h1 - h0) / dt + ef;
            raw += -edot * dt;
        }
        CHECK(e.raw_cost == doctest::Approx(raw).epsilon(1e-10));
    }
}

TEST_CASE("segment cost is additive over concatenation") {
    Gen gen(4);
    for (int trial = 0; trial < 50; ++trial) {
        const WindField field = gen.field(2);
        State s0 = gen.state();
        s0.height = 800.0;
        const ControlSequence a = gen.sequence(10, 10.0);
        const ControlSequence b = gen.sequence(10, 10.0);
        std::vector<ControlInput> joined;
        for (const auto& s : a.steps()) joined.push_back(s.control);
        for (const auto& s : b.steps()) joined.push_back(s.control);

        const auto seg_a = fly(s0, a, field);
        const auto seg_b = fly(seg_a.end(), b, field);
        const auto seg_ab = fly(s0, ControlSequence(joined, 20.0), field);
        const double sum = segment_cost(seg_a, kAircraft).raw_cost + segment_cost(seg_b, kAircraft).raw_cost;
        CHECK(std::abs(segment_cost(seg_ab, kAircraft).raw_cost - sum) < 1e-9);
    }
}

TEST_CASE("adding an updraft never raises raw cost") {
    Gen gen(5);
    const auto lib = enumerate_primitives(kCfg);
    for (int trial = 0; trial < 200; ++trial) {
        const MotionPrimitive& p = lib[static_cast<std::size_t>(gen.integer(0, 173))];
        WindField calm;
        calm.ambient = {gen.uniform(-3, 3), gen.uniform(-3, 3), 0.0};
        WindField lifted = calm;
        lifted.thermals.push_back(gen.thermal(200));
        State s0 = gen.state(200);
        s0.height = 300.0;
        const auto seq = to_control_sequence(p, kCfg);
        const double c0 = segment_cost(fly(s0, seq, calm), kAircraft).raw_cost;
        const double c1 = segment_cost(fly(s0, seq, lifted), kAircraft).raw_cost;
        INFO("primitive " << p.id);
        CHECK(c1 <= c0 + 1e-9);
    }
}

TEST_CASE("climb and matching descent cancel the height term") {
    const State s0{0, 0, 0, 300};
    const auto up = fly(s0, ControlInput{15, deg_to_rad(12.0), deg_to_rad(15.0)});
    const auto down = fly(up.end(), ControlInput{15, deg_to_rad(12.0), deg_to_rad(-15.0)});
    CHECK(std::abs(down.end().height - s0.height) < 1e-9);
    double height_sum = 0.0, e_dot_sum = 0.0, fuel_sum = 0.0;
    for (const auto* seg : {&up, &down}) {
        for (const auto& st : segment_cost(*seg, kAircraft).steps) {
            height_sum += st.height_rate_term;
            e_dot_sum += st.e_dot;
            fuel_sum += st.fuel_rate;
        }
    }
    CHECK(std::abs(height_sum) < 1e-6);
    CHECK(e_dot_sum == doctest::Approx(fuel_sum).epsilon(1e-9));
}

TEST_CASE("a stalled ground track is a degenerate segment") {
    WindField headwind;
    headwind.ambient = {-10.0, 0.0, 0.0};
    const auto seg = fly({0, 0, 0, 100}, ControlInput{10, 0, 0}, headwind);
    CHECK_THROWS_AS(segment_cost(seg, kAircraft), DegenerateSegment);
    CostOptions lenient;
    lenient.min_ground_speed = 0.0;
    CHECK_NOTHROW(segment_cost(seg, kAircraft, lenient));
}

TEST_CASE("offset cost is raw cost plus offset times distance") {
    Gen gen(6);
    CostOptions opts;
    opts.cost_offset = 7.5;
    for (int trial = 0; trial < 50; ++trial) {
        const auto seg = fly({0, 0, 0, 500}, gen.sequence(), gen.field(2));
        const auto e = segment_cost(seg, kAircraft, opts);
        CHECK(e.offset_cost == doctest::Approx(e.raw_cost + 7.5 * e.ground_distance).epsilon(1e-14));
    }
}

TEST_CASE("derived offset keeps every sampled edge nonnegative") {
    const Environment env = default_environment();
    const auto envelope = ControlEnvelope::for_config(kCfg);
    CostOptions opts;
    opts.cost_offset = cost_offset_bound(env.wind, envelope, kCfg, 10, kAircraft.gravity);
    CHECK(opts.cost_offset == doctest::Approx(9.0746).epsilon(1e-4));
    CHECK(opts.cost_offset <= kAircraft.gravity);

    PrimitiveSampler prim(enumerate_primitives(kCfg), kCfg);
    ContinuousSampler cont(envelope, kCfg);
    Rng rng(8);
    Gen gen(8);
    int evaluated = 0;
    for (int i = 0; i < 4000; ++i) {
        // Start inside the thermal half the time, where the worst edges live.
        State s0 = gen.state(700);
        if (gen.coin() && !env.wind.thermals.empty()) {
            const Thermal& t = env.wind.thermals.front();
            s0.north = t.center_north + gen.uniform(-t.radius, t.radius);
            s0.east = t.center_east + gen.uniform(-t.radius, t.radius);
            s0.height = gen.uniform(t.base_height, t.top_height);
        }
        ControlSampler& sampler = (i % 2 == 0) ? static_cast<ControlSampler&>(prim) : cont;
        const auto seg = propagate(s0, *sampler.sample(rng).sequence, env.wind, {10, kNoFloor});
        REQUIRE(seg.has_value());
        try {
            const auto e = segment_cost(*seg, kAircraft, opts);
            CHECK(e.offset_cost >= -1e-9);
            ++evaluated;
        } catch (const DegenerateSegment&) {
        }
    }
    CHECK(evaluated > 3900);
}
