#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "soarplan/bench.hpp"
#include "soarplan/config.hpp"
#include "soarplan/dynamics.hpp"
#include "soarplan/energy.hpp"
#include "soarplan/planner.hpp"
#include "soarplan/primitives.hpp"
#include "soarplan/report.hpp"
#include "soarplan/wind.hpp"

namespace py = pybind11;
using namespace soarplan;

namespace {

template <typename T>
std::string repr_state(const T& s) {
    std::ostringstream o;
    o << "State(north=" << s.north << ", east=" << s.east << ", course=" << s.course
      << ", height=" << s.height << ")";
    return o.str();
}

py::dict solution_dict(const Solution& s) {
    py::dict d;
    d["raw_cost"] = s.raw_cost;
    d["offset_cost"] = s.offset_cost;
    d["flight_time"] = s.flight_time;
    d["depth"] = s.depth;
    d["control_ids"] = s.control_ids;
    d["segment_raw_costs"] = s.segment_raw_costs;
    return d;
}

std::vector<State> knot_states(const TrajectorySegment& seg) {
    std::vector<State> out;
    out.reserve(seg.states.size());
    for (const auto& ts : seg.states) out.push_back(ts.state);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Minimum-energy kinodynamic planning for a fixed-wing aircraft in thermals";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DegenerateSegment>(m, "DegenerateSegment", PyExc_ArithmeticError);

    py::class_<State>(m, "State")
        .def(py::init<>())
        .def(py::init([](double n, double e, double course, double h) { return State{n, e, course, h}; }),
             py::arg("north"), py::arg("east"), py::arg("course"), py::arg("height"))
        .def_readwrite("north", &State::north)
        .def_readwrite("east", &State::east)
        .def_readwrite("course", &State::course)
        .def_readwrite("height", &State::height)
        .def(py::self == py::self)
        .def("__repr__", &repr_state<State>);

    py::class_<ControlInput>(m, "ControlInput")
        .def(py::init([](double v, double rate, double gamma) { return ControlInput{v, rate, gamma}; }),
             py::arg("airspeed"), py::arg("turn_rate"), py::arg("flight_path_angle"))
        .def_readwrite("airspeed", &ControlInput::airspeed)
        .def_readwrite("turn_rate", &ControlInput::turn_rate)
        .def_readwrite("flight_path_angle", &ControlInput::flight_path_angle)
        .def("valid", &ControlInput::valid);

    py::class_<WindVector>(m, "WindVector")
        .def(py::init([](double n, double e, double d) { return WindVector{n, e, d}; }),
             py::arg("north") = 0.0, py::arg("east") = 0.0, py::arg("down") = 0.0)
        .def_readwrite("north", &WindVector::north)
        .def_readwrite("east", &WindVector::east)
        .def_readwrite("down", &WindVector::down);

    py::class_<Thermal>(m, "Thermal")
        .def(py::init([](double n, double e, double r, double w0, double base, double top) {
                 Thermal t{n, e, r, w0, base, top};
                 t.validate();
                 return t;
             }),
             py::arg("center_north"), py::arg("center_east"), py::arg("radius"),
             py::arg("core_updraft"), py::arg("base_height"), py::arg("top_height"))
        .def_readwrite("center_north", &Thermal::center_north)
        .def_readwrite("center_east", &Thermal::center_east)
        .def_readwrite("radius", &Thermal::radius)
        .def_readwrite("core_updraft", &Thermal::core_updraft)
        .def_readwrite("base_height", &Thermal::base_height)
        .def_readwrite("top_height", &Thermal::top_height)
        .def("updraft_at", &Thermal::updraft_at, py::arg("north"), py::arg("east"), py::arg("height"));

    py::class_<WindField>(m, "WindField")
        .def(py::init<>())
        .def_readwrite("ambient", &WindField::ambient)
        .def_readwrite("thermals", &WindField::thermals)
        .def("at", &WindField::at, py::arg("north"), py::arg("east"), py::arg("height"))
        .def("validate", &WindField::validate);

    py::class_<GoalRegion>(m, "GoalRegion")
        .def(py::init<>())
        .def_readwrite("north", &GoalRegion::north)
        .def_readwrite("east", &GoalRegion::east)
        .def_readwrite("height", &GoalRegion::height)
        .def_readwrite("radius", &GoalRegion::radius)
        .def("contains", &GoalRegion::contains);

    py::class_<WorldBounds>(m, "WorldBounds")
        .def(py::init<>())
        .def_readwrite("north_min", &WorldBounds::north_min)
        .def_readwrite("north_max", &WorldBounds::north_max)
        .def_readwrite("east_min", &WorldBounds::east_min)
        .def_readwrite("east_max", &WorldBounds::east_max)
        .def_readwrite("height_min", &WorldBounds::height_min)
        .def_readwrite("height_max", &WorldBounds::height_max);

    py::class_<Environment>(m, "Environment")
        .def(py::init<>())
        .def_readwrite("wind", &Environment::wind)
        .def_readwrite("start", &Environment::start)
        .def_readwrite("goal", &Environment::goal)
        .def_readwrite("bounds", &Environment::bounds);

    py::class_<AircraftParams>(m, "AircraftParams")
        .def(py::init<>())
        .def_readwrite("mass", &AircraftParams::mass)
        .def_readwrite("wing_area", &AircraftParams::wing_area)
        .def_readwrite("lift_coefficient", &AircraftParams::lift_coefficient)
        .def_readwrite("zero_lift_drag", &AircraftParams::zero_lift_drag)
        .def_readwrite("aspect_ratio", &AircraftParams::aspect_ratio)
        .def_readwrite("oswald", &AircraftParams::oswald)
        .def_readwrite("eta_ec", &AircraftParams::eta_ec)
        .def_readwrite("eta_p", &AircraftParams::eta_p)
        .def_readwrite("gravity", &AircraftParams::gravity)
        .def("validate", &AircraftParams::validate);

    py::enum_<PrimitiveKind>(m, "PrimitiveKind")
        .value("STRAIGHT", PrimitiveKind::Straight)
        .value("CURVE", PrimitiveKind::Curve)
        .value("SPIRAL", PrimitiveKind::Spiral)
        .value("SPLINE", PrimitiveKind::Spline);

    py::class_<PrimitiveConfig>(m, "PrimitiveConfig")
        .def(py::init<>())
        .def_readwrite("segment_duration", &PrimitiveConfig::segment_duration)
        .def_readwrite("steps", &PrimitiveConfig::steps);

    py::class_<MotionPrimitive>(m, "MotionPrimitive")
        .def_readonly("id", &MotionPrimitive::id)
        .def_readonly("kind", &MotionPrimitive::kind)
        .def_readonly("airspeed", &MotionPrimitive::airspeed)
        .def_readonly("first_half_turn", &MotionPrimitive::first_half_turn)
        .def_readonly("second_half_turn", &MotionPrimitive::second_half_turn)
        .def_readonly("flight_path_angle", &MotionPrimitive::flight_path_angle)
        .def_property_readonly("total_turn", &MotionPrimitive::total_turn);

    m.def("enumerate_primitives", &enumerate_primitives, py::arg("config") = PrimitiveConfig{});
    m.def(
        "primitive_controls",
        [](const MotionPrimitive& p, const PrimitiveConfig& cfg) {
            std::vector<ControlInput> out;
            for (const auto& s : to_control_sequence(p, cfg).steps()) out.push_back(s.control);
            return out;
        },
        py::arg("primitive"), py::arg("config") = PrimitiveConfig{},
        "Per-step controls of a primitive.");

    m.def(
        "propagate",
        [](const State& start, const std::vector<ControlInput>& controls, double duration,
           const WindField& field, int substeps, double height_floor) -> std::optional<std::vector<State>> {
            const auto seg = propagate(start, ControlSequence(controls, duration), field,
                                       {substeps, height_floor});
            if (!seg) return std::nullopt;
            return knot_states(*seg);
        },
        py::arg("start"), py::arg("controls"), py::arg("duration"), py::arg("field") = WindField{},
        py::arg("substeps") = 10, py::arg("height_floor") = -1e300,
        "Knot states (N + 1) of an RK4 flight, or None when the floor is breached.");

    m.def("air_density", &air_density, py::arg("height"));
    m.def("bank_angle", &bank_angle, py::arg("airspeed"), py::arg("turn_rate"), py::arg("gravity") = 9.81);
    m.def(
        "lift_drag",
        [](double v, double h, const AircraftParams& p) {
            const auto f = lift_drag(v, h, p);
            return py::make_tuple(f.lift, f.drag);
        },
        py::arg("airspeed"), py::arg("height"), py::arg("aircraft") = AircraftParams{});
    m.def(
        "thrust",
        [](double v, double gamma, double bank, double h, const AircraftParams& p) {
            const auto f = thrust(v, gamma, bank, h, p);
            return py::make_tuple(f.thrust_x, f.thrust_z, f.thrust);
        },
        py::arg("airspeed"), py::arg("flight_path_angle"), py::arg("bank"), py::arg("height"),
        py::arg("aircraft") = AircraftParams{});
    m.def("fuel_rate", &fuel_rate, py::arg("thrust"), py::arg("airspeed"),
          py::arg("aircraft") = AircraftParams{});
    m.def(
        "segment_cost",
        [](const State& start, const std::vector<ControlInput>& controls, double duration,
           const WindField& field, const AircraftParams& p, double cost_offset) {
            const auto seg = propagate(start, ControlSequence(controls, duration), field,
                                       {10, -1e300});
            if (!seg) throw std::runtime_error("segment left the valid state space");
            const auto e = segment_cost(*seg, p, {cost_offset, 0.1});
            py::dict d;
            d["raw_cost"] = e.raw_cost;
            d["offset_cost"] = e.offset_cost;
            d["ground_distance"] = e.ground_distance;
            d["e_dot"] = e.e_dot;
            d["fuel_rate"] = e.fuel_rate;
            return d;
        },
        py::arg("start"), py::arg("controls"), py::arg("duration"), py::arg("field") = WindField{},
        py::arg("aircraft") = AircraftParams{}, py::arg("cost_offset") = 0.0);

    m.def("default_environment", &default_environment);
    m.def("load_environment", [](const std::string& text) { return load_environment(text); });
    m.def("save_environment", &save_environment);
    m.def("load_aircraft", [](const std::string& text) { return load_aircraft(text); });
    m.def("save_aircraft", &save_aircraft);
    m.def(
        "validate_configs",
        [](const std::string& env, const std::string& aircraft, const std::string& planner) {
            std::vector<std::string> issues;
            try {
                issues = cross_check(load_environment(env), load_aircraft(aircraft),
                                     load_planner(planner));
            } catch (const ConfigError& e) {
                issues = e.issues();
            }
            return issues;
        },
        py::arg("environment"), py::arg("aircraft"), py::arg("planner"),
        "Config texts in, list of problems out (empty when valid).");

    m.def(
        "plan",
        [](const Environment& env, const AircraftParams& aircraft, const std::string& sampler,
           std::uint64_t seed, std::int64_t iterations, const std::string& planner_text) {
            PlannerConfig cfg = planner_text.empty() ? PlannerConfig{} : load_planner(planner_text);
            cfg.sampler = parse_sampler_kind(sampler);
            cfg.seed = seed;
            cfg.budget = Budget::of_iterations(iterations);
            PlanResult r;
            {
                py::gil_scoped_release release;
                r = sst_plan(env, aircraft, cfg);
            }
            py::dict d;
            d["status"] = std::string(to_string(r.status));
            d["iterations"] = r.iterations;
            d["active_nodes"] = r.active_nodes;
            d["tree_nodes"] = r.tree_nodes;
            d["witnesses"] = r.witnesses;
            d["cost_offset"] = r.cost_offset;
            d["solution"] = r.status == PlanStatus::Solved ? py::object(solution_dict(r.solution)) : py::none();
            std::ostringstream csv;
            write_trajectory_csv(csv, trajectory_rows(r.solution, aircraft));
            d["trajectory_csv"] = csv.str();
            d["run_json"] = run_stats_json(r, cfg);
            return d;
        },
        py::arg("environment"), py::arg("aircraft") = AircraftParams{}, py::arg("sampler") = "primitive",
        py::arg("seed") = 1, py::arg("iterations") = 200000, py::arg("planner") = "",
        "One seeded SST run with an iteration budget.");

    m.def(
        "bench",
        [](const Environment& env, const AircraftParams& aircraft, int runs, std::uint64_t base_seed,
           std::int64_t iterations, const std::filesystem::path& out_dir) {
            ExperimentSpec spec;
            spec.environment = env;
            spec.aircraft = aircraft;
            spec.planner.budget = Budget::of_iterations(iterations);
            spec.runs = runs;
            spec.base_seed = base_seed;
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_experiment(spec);
                if (!out_dir.empty()) export_report(r.records, r.summary, out_dir);
            }
            return format_summary(r.summary);
        },
        py::arg("environment"), py::arg("aircraft") = AircraftParams{}, py::arg("runs") = 30,
        py::arg("base_seed") = 1, py::arg("iterations") = 200000, py::arg("out_dir") = std::filesystem::path{},
        "Primitive vs continuous comparison; returns the text summary and optionally writes the report.");

    m.def(
        "primitives_svg",
        [](const PrimitiveConfig& cfg) { return plot_primitives(enumerate_primitives(cfg), cfg); },
        py::arg("config") = PrimitiveConfig{});

#ifdef SOARPLAN_VERSION
    m.attr("__version__") = SOARPLAN_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
