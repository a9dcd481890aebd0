#include <doctest.h>

#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "soarplan/config.hpp"
#include "soarplan/format.hpp"
#include "soarplan/report.hpp"
#include "support/support.hpp"

using namespace soarplan;
using soarplan::testing::lines_of;
using soarplan::testing::well_formed_xml;

namespace {

PlanResult solved_run() {
    Environment env;
    env.start = {0, 0, 0, 200};
    env.goal = {400, 0, 200, 60};
    env.bounds = {-300, 800, -500, 500, 0, 500};
    PlannerConfig cfg;
    cfg.budget = Budget::of_iterations(20000);
    cfg.seed = 5;
    const PlanResult r = sst_plan(env, {}, cfg);
    REQUIRE(r.status == PlanStatus::Solved);
    return r;
}

std::string to_csv(const std::vector<TrajectoryRow>& rows) {
    std::ostringstream out;
    write_trajectory_csv(out, rows);
    return out.str();
}

std::set<std::string> polyline_strokes(const std::string& svg) {
    std::set<std::string> out;
    const std::regex re("<polyline[^>]*stroke=\"([^\"]+)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
        out.insert((*it)[1]);
    }
    return out;
}

}  // namespace

TEST_CASE("trajectory rows cover every knot once") {
    const PlanResult r = solved_run();
    const AircraftParams aircraft;
    const auto rows = trajectory_rows(r.solution, aircraft);
    const std::size_t segments = r.solution.segments.size();
    REQUIRE(rows.size() == segments * 10 + 1);
    CHECK(rows.front().time == 0.0);
    CHECK(rows.back().time == doctest::Approx(r.solution.flight_time));
    CHECK(rows.back().state == r.solution.segments.back().end());
    double raw = 0.0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        CHECK(rows[i + 1].time > rows[i].time);
        CHECK(rows[i].control_id == r.solution.control_ids[i / 10]);
        raw += -rows[i].step_e_dot * (rows[i + 1].time - rows[i].time);
    }
    // Per-distance cost integrated over each step collapses to -e_dot dt.
    CHECK(raw == doctest::Approx(r.solution.raw_cost).epsilon(1e-9));
}

TEST_CASE("trajectory CSV round-trips exactly") {
    const auto rows = trajectory_rows(solved_run().solution, {});
    const std::string text = to_csv(rows);
    const auto lines = lines_of(text);
    REQUIRE(lines.size() == rows.size() + 2);
    CHECK(lines[0] == "# soarplan-trajectory v1");
    CHECK(lines[1] ==
          "time,north,east,height,course,airspeed,turn_rate,flight_path_angle,control_id,step_raw_e_dot");
    std::istringstream in(text);
    CHECK(read_trajectory_csv(in) == rows);
}

TEST_CASE("an empty solution writes the header only") {
    const auto rows = trajectory_rows(Solution{}, {});
    CHECK(rows.empty());
    const auto lines = lines_of(to_csv(rows));
    CHECK(lines.size() == 2);
    std::istringstream in(to_csv(rows));
    CHECK(read_trajectory_csv(in).empty());
}

TEST_CASE("malformed trajectory CSV names the line") {
    auto error_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_trajectory_csv(in);
        } catch (const std::runtime_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    const std::string head =
        "# soarplan-trajectory v1\n"
        "time,north,east,height,course,airspeed,turn_rate,flight_path_angle,control_id,step_raw_e_dot\n";
    CHECK(error_of(head + "0,0,0,0,0,10,0,0,3,-1\n").empty());
    CHECK(error_of(head + "0,0,0,0,0,10,0,0,3\n").find("line 3") != std::string::npos);
    CHECK(error_of(head + "0,0,0,0,0,10,0,0,x,-1\n").find("line 3") != std::string::npos);
    CHECK(error_of(head + "0,0,0,nan?,0,10,0,0,1,-1\n").find("line 3") != std::string::npos);
    CHECK(error_of("# soarplan-trajectory v9\n").find("line 1") != std::string::npos);
    CHECK(!error_of("").empty());
}

TEST_CASE("run stats JSON carries the schema and metrics") {
    const PlanResult r = solved_run();
    PlannerConfig cfg;
    cfg.budget = Budget::of_iterations(20000);
    cfg.seed = 5;
    const auto j = nlohmann::json::parse(run_stats_json(r, cfg));
    CHECK(j["schema"] == "soarplan-run/1");
    CHECK(j["sampler"] == "primitive");
    CHECK(j["seed"] == 5);
    CHECK(j["budget"]["iterations"] == 20000);
    CHECK(j["status"] == "solved");
    CHECK(j["iterations"] == 20000);
    CHECK(j["raw_cost"].get<double>() == r.solution.raw_cost);
    CHECK(j["offset_cost"].get<double>() == r.solution.offset_cost);
    CHECK(j["flight_time_s"].get<double>() == r.solution.flight_time);
    CHECK(j["control_ids"].size() == r.solution.control_ids.size());
    CHECK(j.contains("timing"));

    PlanResult failed;
    failed.iterations = 10;
    const auto f = nlohmann::json::parse(run_stats_json(failed, cfg));
    CHECK(f["status"] == "no_solution");
    CHECK_FALSE(f.contains("raw_cost"));
    CHECK_FALSE(f.contains("flight_time_s"));
}

TEST_CASE("solution views are well-formed SVG") {
    const auto rows = trajectory_rows(solved_run().solution, {});
    const Environment env = default_environment();
    for (const std::string& svg : {plot_top_view(rows, env), plot_side_view(rows, env),
                                   plot_top_view({}, env), plot_side_view({}, env)}) {
        std::string why;
        CHECK_MESSAGE(well_formed_xml(svg, &why), why);
        CHECK(svg.find("<svg") != std::string::npos);
    }
}

TEST_CASE("primitive export lists all 174 with their kinds") {
    const PrimitiveConfig cfg;
    const auto lib = enumerate_primitives(cfg);
    std::ostringstream out;
    write_primitives_csv(out, lib, cfg);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 176);
    CHECK(lines[0] == "# soarplan-primitives v1");
    std::map<std::string, int> kinds;
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto fields = split(lines[i], ',');
        REQUIRE(fields.size() == 10);
        CHECK(std::string(fields[0]) == std::to_string(i - 2));
        ++kinds[std::string(fields[1])];
    }
    CHECK(kinds == std::map<std::string, int>{{"curve", 60}, {"spiral", 80}, {"spline", 24}, {"straight", 10}});

    // Row for a 20 m/s level straight: 200 m due north.
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        if (f[1] == "straight" && f[2] == "20" && f[5] == "0") {
            CHECK(parse_double(f[6]).value() == doctest::Approx(200.0).epsilon(1e-12));
            CHECK(parse_double(f[7]).value() == doctest::Approx(0.0));
        }
    }

    const std::string svg = plot_primitives(lib, cfg);
    std::string why;
    CHECK_MESSAGE(well_formed_xml(svg, &why), why);
    CHECK(polyline_strokes(svg) == std::set<std::string>{"#2ca02c", "#1f77b4", "#000000", "#d62728"});
}

TEST_CASE("XML checker rejects broken documents") {
    CHECK(well_formed_xml("<?xml version=\"1.0\"?>\n<svg a=\"1\"><g><line/></g></svg>\n"));
    CHECK_FALSE(well_formed_xml("<svg><g></svg>"));
    CHECK_FALSE(well_formed_xml("<svg></svg><svg></svg>"));
    CHECK_FALSE(well_formed_xml("<svg><text>a & b</text></svg>"));
}
