#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "soarplan/config.hpp"
#include "support/support.hpp"

using namespace soarplan;
using soarplan::testing::Gen;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(SOARPLAN_SOURCE_DIR) / "configs";

/// Issues from a failing load, or an empty list if it loaded.
template <typename Fn>
std::vector<std::string> issues_of(Fn&& load) {
    try {
        load();
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool any_contains(const std::vector<std::string>& issues, const std::string& needle) {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

const char* kMinimalEnv =
    "version = 1\n"
    "start = 0 0 100 0\n"
    "goal = 500 0 100 20\n"
    "bounds = -100 600 -300 300 0 400\n";

}  // namespace

TEST_CASE("shipped config files match the built-in defaults") {
    CHECK(load_environment_file(kConfigs / "default_env.cfg") == default_environment());
    CHECK(load_aircraft_file(kConfigs / "aircraft.cfg") == AircraftParams{});
    CHECK(load_planner_file(kConfigs / "planner.cfg") == PlannerConfig{});
    CHECK(cross_check(default_environment(), {}, {}).empty());
}

TEST_CASE("environment round-trips through text") {
    Gen gen(1);
    for (int trial = 0; trial < 100; ++trial) {
        Environment env;
        env.wind = gen.field(4);
        env.start = gen.state();
        env.goal = {gen.uniform(-500, 500), gen.uniform(-500, 500), gen.uniform(0, 300), gen.uniform(1, 80)};
        env.bounds = {-1000, 1000, -1000, 1000, gen.uniform(-50, 0), gen.uniform(500, 900)};
        const std::string text = save_environment(env);
        const Environment back = load_environment(text);
        CHECK(back == env);
        CHECK(save_environment(back) == text);
    }
}

TEST_CASE("aircraft and planner round-trip through text") {
    AircraftParams p;
    p.mass = 3.25;
    p.eta_ec = 0.71;
    CHECK(load_aircraft(save_aircraft(p)) == p);

    PlannerConfig cfg;
    cfg.sampler = SamplerKind::Continuous;
    cfg.seed = 123456789012345ULL;
    cfg.cost_offset = 4.5;
    cfg.weights = {1, 2, 0.5};
    cfg.primitives = {8.0, 4};
    CHECK(load_planner(save_planner(cfg)) == cfg);
    cfg.budget = Budget::of_seconds(1.25);
    cfg.cost_offset.reset();
    CHECK(load_planner(save_planner(cfg)) == cfg);
}

TEST_CASE("ambient wind defaults to calm") {
    const Environment env = load_environment(kMinimalEnv);
    CHECK(env.wind.ambient == WindVector{0, 0, 0});
    CHECK(env.wind.thermals.empty());
    CHECK(env.start.height == 100.0);
}

TEST_CASE("start course is normalized on load") {
    const auto env = load_environment("version = 1\nstart = 0 0 100 7\ngoal = 500 0 100 20\nbounds = -100 600 -300 300 0 400\n");
    CHECK(env.start.course == doctest::Approx(7.0 - 2.0 * kPi));
}

TEST_CASE("config errors name the source line and field") {
    SUBCASE("thermal radius must be positive") {
        const auto issues = issues_of([] {
            load_environment(std::string(kMinimalEnv) + "thermal = 0 0 0 3 0 100\n", "env.cfg");
        });
        REQUIRE(issues.size() == 1);
        CHECK(issues[0].find("env.cfg:5") == 0);
        CHECK(any_contains(issues, "radius"));
    }
    SUBCASE("unknown key") {
        const auto issues = issues_of([] { load_environment(std::string(kMinimalEnv) + "updraft = 3\n", "env.cfg"); });
        CHECK(any_contains(issues, "env.cfg:5: unknown key 'updraft'"));
    }
    SUBCASE("duplicate key") {
        const auto issues = issues_of([] { load_aircraft("version = 1\nmass = 2\nmass = 3\n", "a.cfg"); });
        CHECK(any_contains(issues, "a.cfg:3: duplicate key 'mass'"));
    }
    SUBCASE("missing or wrong version") {
        CHECK(any_contains(issues_of([] { load_aircraft("mass = 2\n"); }), "version"));
        CHECK(any_contains(issues_of([] { load_aircraft("version = 2\n", "a.cfg"); }), "a.cfg:1: unsupported version"));
    }
    SUBCASE("wrong value count and non-numbers") {
        const auto issues = issues_of([] {
            load_environment("version = 1\nstart = 0 0 100\ngoal = 1 2 x 4\nbounds = -100 600 -300 300 0 400\n", "e");
        });
        CHECK(any_contains(issues, "e:2: 'start' expects 4 value(s), got 3"));
        CHECK(any_contains(issues, "e:3: 'goal': 'x' is not a finite number"));
    }
    SUBCASE("a line without '='") {
        CHECK(any_contains(issues_of([] { load_aircraft("version = 1\nmass 2\n", "a"); }), "a:2: expected 'key = value'"));
    }
    SUBCASE("planner constraints name the parameter") {
        const auto issues = issues_of([] { load_planner("version = 1\nselection_radius = 20\nwitness_radius = 30\n"); });
        CHECK(any_contains(issues, "witness_radius"));
        CHECK(any_contains(issues_of([] { load_planner("version = 1\nsampler = lattice\n", "p"); }), "p:2:"));
        CHECK(any_contains(issues_of([] { load_planner("version = 1\niterations = 10\nseconds = 2\n", "p"); }),
                           "p:3: set either"));
    }
    SUBCASE("aircraft values are validated") {
        CHECK(any_contains(issues_of([] { load_aircraft("version = 1\neta_p = 1.5\n"); }), "eta_p"));
    }
}

TEST_CASE("every problem in a file is reported at once") {
    const auto issues = issues_of([] {
        load_environment(
            "version = 1\n"
            "start = 0 0 100 0\n"
            "goal = 500 0 100 -1\n"
            "bounds = 600 -100 -300 300 0 400\n"
            "thermal = 0 0 100 3 200 100\n"
            "colour = red\n",
            "env.cfg");
    });
    CHECK(issues.size() == 4);
    CHECK(any_contains(issues, "env.cfg:3: goal.radius"));
    CHECK(any_contains(issues, "env.cfg:4: bounds: north_min"));
    CHECK(any_contains(issues, "env.cfg:5:"));
    CHECK(any_contains(issues, "env.cfg:6: unknown key 'colour'"));
}

TEST_CASE("a missing file names its path") {
    const auto issues = issues_of([] { load_environment_file("/nonexistent/dir/env.cfg"); });
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].find("/nonexistent/dir/env.cfg") != std::string::npos);
}

TEST_CASE("cross_check flags inconsistent configs") {
    Environment env = default_environment();
    env.goal.north = 5000;
    auto issues = cross_check(env, {}, {});
    CHECK(any_contains(issues, "goal center lies outside"));

    PlannerConfig cfg;
    cfg.witness_radius = 80.0;
    env = default_environment();
    env.start.height = -10.0;
    issues = cross_check(env, {}, cfg);
    CHECK(issues.size() == 3);
    CHECK(any_contains(issues, "witness_radius must be < selection_radius"));
    CHECK(any_contains(issues, "start state lies outside"));
    CHECK(any_contains(issues, "height_floor"));
}
