#include "soarplan/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "soarplan/format.hpp"
#include "soarplan/svg.hpp"

namespace soarplan {

namespace {

constexpr const char* kTrajectoryHeader =
    "time,north,east,height,course,airspeed,turn_rate,flight_path_angle,control_id,step_raw_e_dot";

const char* kind_color(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::Straight: return svg::colors::kStraight;
        case PrimitiveKind::Curve: return svg::colors::kCurve;
        case PrimitiveKind::Spiral: return svg::colors::kSpiral;
        case PrimitiveKind::Spline: return svg::colors::kSpline;
    }
    return "#888888";
}

void add_map_features(svg::LinePlot& plot, const Environment& env) {
    for (const auto& t : env.wind.thermals) {
        plot.circles.push_back({{t.center_east, t.center_north}, t.radius, svg::colors::kThermal,
                                svg::colors::kThermal, 0.35});
    }
    plot.circles.push_back({{env.goal.east, env.goal.north}, env.goal.radius, svg::colors::kGoal,
                            svg::colors::kGoal, 0.3});
    plot.markers.push_back({{env.start.east, env.start.north}, svg::colors::kStart, "start"});
    plot.legend = {{"path", svg::colors::kPath},
                   {"goal", svg::colors::kGoal},
                   {"thermal", svg::colors::kThermal}};
}

}  // namespace

std::vector<TrajectoryRow> trajectory_rows(const Solution& solution, const AircraftParams& aircraft) {
    std::vector<TrajectoryRow> rows;
    double t0 = 0.0;
    CostOptions options;
    options.min_ground_speed = 0.0;
    for (std::size_t s = 0; s < solution.segments.size(); ++s) {
        const TrajectorySegment& seg = solution.segments[s];
        const SegmentEnergy energy = segment_cost(seg, aircraft, options);
        const int control_id = s < solution.control_ids.size() ? solution.control_ids[s] : -1;
        for (std::size_t k = 0; k < seg.controls.step_count(); ++k) {
            rows.push_back({t0 + seg.states[k].time, seg.states[k].state, seg.controls.step(k).control,
                            control_id, energy.steps[k].e_dot});
        }
        t0 += seg.duration();
        if (s + 1 == solution.segments.size()) {
            rows.push_back({t0, seg.end(), seg.controls.steps().back().control, control_id,
                            energy.steps.back().e_dot});
        }
    }
    return rows;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
    out << "# " << kTrajectorySchema << "\n" << kTrajectoryHeader << "\n";
    for (const auto& r : rows) {
        out << format_double(r.time) << ',' << format_double(r.state.north) << ','
            << format_double(r.state.east) << ',' << format_double(r.state.height) << ','
            << format_double(r.state.course) << ',' << format_double(r.control.airspeed) << ','
            << format_double(r.control.turn_rate) << ',' << format_double(r.control.flight_path_angle)
            << ',' << r.control_id << ',' << format_double(r.step_e_dot) << '\n';
    }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
    std::vector<TrajectoryRow> rows;
    std::string line;
    int number = 0;
    bool header_seen = false;
    auto fail = [&number](const std::string& msg) {
        throw std::runtime_error("trajectory csv line " + std::to_string(number) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (line != std::string("# ") + kTrajectorySchema) fail("unsupported schema '" + line + "'");
            continue;
        }
        if (!header_seen) {
            if (line != kTrajectoryHeader) fail("unexpected header");
            header_seen = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 10) fail("expected 10 fields");
        double v[10];
        for (int i = 0; i < 10; ++i) {
            if (i == 8) continue;
            const auto d = parse_double(fields[static_cast<std::size_t>(i)]);
            if (!d) fail("bad number '" + std::string(fields[static_cast<std::size_t>(i)]) + "'");
            v[i] = *d;
        }
        const auto id = parse_integer<int>(fields[8]);
        if (!id) fail("bad control id");
        rows.push_back({v[0], {v[1], v[2], v[4], v[3]}, {v[5], v[6], v[7]}, *id, v[9]});
    }
    if (!header_seen) throw std::runtime_error("trajectory csv: missing header");
    return rows;
}

std::string run_stats_json(const PlanResult& r, const PlannerConfig& cfg) {
    nlohmann::ordered_json j;
    j["schema"] = kRunStatsSchema;
    j["sampler"] = std::string(to_string(cfg.sampler));
    j["seed"] = cfg.seed;
    if (cfg.budget.kind == Budget::Kind::Iterations) {
        j["budget"] = {{"iterations", cfg.budget.iterations}};
    } else {
        j["budget"] = {{"seconds", cfg.budget.seconds}};
    }
    j["status"] = std::string(to_string(r.status));
    j["iterations"] = r.iterations;
    j["active_nodes"] = r.active_nodes;
    j["tree_nodes"] = r.tree_nodes;
    j["witnesses"] = r.witnesses;
    j["cost_offset_per_m"] = r.cost_offset;
    if (r.status == PlanStatus::Solved) {
        j["raw_cost"] = r.solution.raw_cost;
        j["offset_cost"] = r.solution.offset_cost;
        j["flight_time_s"] = r.solution.flight_time;
        j["depth"] = r.solution.depth;
        j["control_ids"] = r.solution.control_ids;
    }
    // Timing is the only nondeterministic part of the record.
    j["timing"] = {{"loop_seconds", r.loop_seconds},
                   {"mean_iteration_seconds", r.mean_iteration_seconds},
                   {"max_iteration_seconds", r.max_iteration_seconds}};
    return j.dump(2) + "\n";
}

std::string plot_top_view(const std::vector<TrajectoryRow>& rows, const Environment& env) {
    svg::LinePlot plot;
    plot.title = "Solution path (top view)";
    plot.x_label = "east [m]";
    plot.y_label = "north [m]";
    plot.equal_aspect = true;
    add_map_features(plot, env);
    svg::Polyline path{{}, svg::colors::kPath, 2.0, 1.0};
    for (const auto& r : rows) path.points.emplace_back(r.state.east, r.state.north);
    plot.lines.push_back(std::move(path));
    return svg::render(plot);
}

std::string plot_side_view(const std::vector<TrajectoryRow>& rows, const Environment& env) {
    svg::LinePlot plot;
    plot.title = "Solution path (side view)";
    plot.x_label = "horizontal distance flown [m]";
    plot.y_label = "height [m]";
    svg::Polyline path{{}, svg::colors::kPath, 2.0, 1.0};
    double along = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) {
            along += std::hypot(rows[i].state.north - rows[i - 1].state.north,
                                rows[i].state.east - rows[i - 1].state.east);
        }
        path.points.emplace_back(along, rows[i].state.height);
    }
    plot.markers.push_back({{0.0, env.start.height}, svg::colors::kStart, "start"});
    svg::Polyline goal_band{{{0.0, env.goal.height}, {std::max(along, 1.0), env.goal.height}},
                            svg::colors::kGoal, 1.0, 0.6};
    plot.lines.push_back(std::move(goal_band));
    plot.lines.push_back(std::move(path));
    plot.legend = {{"path", svg::colors::kPath}, {"goal height", svg::colors::kGoal}};
    return svg::render(plot);
}

void write_primitives_csv(std::ostream& out, const std::vector<MotionPrimitive>& library,
                          const PrimitiveConfig& cfg, int substeps_per_step) {
    out << "# " << kPrimitivesSchema << "\n";
    out << "id,kind,airspeed,first_half_turn_deg,second_half_turn_deg,flight_path_angle_deg,"
           "end_north,end_east,end_height,end_course\n";
    const WindField calm;
    PropagationOptions opts{substeps_per_step, -std::numeric_limits<double>::infinity()};
    for (const auto& p : library) {
        const auto seg = propagate(State{}, to_control_sequence(p, cfg), calm, opts);
        const State end = seg ? seg->end() : State{};
        out << p.id << ',' << to_string(p.kind) << ',' << format_double(p.airspeed) << ','
            << format_double(rad_to_deg(p.first_half_turn)) << ','
            << format_double(rad_to_deg(p.second_half_turn)) << ','
            << format_double(rad_to_deg(p.flight_path_angle)) << ',' << format_double(end.north) << ','
            << format_double(end.east) << ',' << format_double(end.height) << ','
            << format_double(end.course) << '\n';
    }
}

std::string plot_primitives(const std::vector<MotionPrimitive>& library, const PrimitiveConfig& cfg,
                            int substeps_per_step) {
    svg::LinePlot plot;
    plot.title = "Motion primitive library (top view)";
    plot.x_label = "east [m]";
    plot.y_label = "north [m]";
    plot.equal_aspect = true;
    const WindField calm;
    PropagationOptions opts{substeps_per_step, -std::numeric_limits<double>::infinity()};
    for (const auto& p : library) {
        const auto seg = propagate(State{}, to_control_sequence(p, cfg), calm, opts);
        if (!seg) continue;
        svg::Polyline line{{}, kind_color(p.kind), 1.0, 0.8};
        for (const auto& ts : seg->states) line.points.emplace_back(ts.state.east, ts.state.north);
        plot.lines.push_back(std::move(line));
    }
    plot.markers.push_back({{0.0, 0.0}, svg::colors::kStart, ""});
    plot.legend = {{"straight", svg::colors::kStraight},
                   {"curve", svg::colors::kCurve},
                   {"spiral", svg::colors::kSpiral},
                   {"spline", svg::colors::kSpline}};
    return svg::render(plot);
}

}  // namespace soarplan
