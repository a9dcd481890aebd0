#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "soarplan/bench.hpp"
#include "soarplan/config.hpp"
#include "soarplan/planner.hpp"
#include "soarplan/primitives.hpp"
#include "soarplan/report.hpp"

namespace soarplan::cli {

namespace {

namespace fs = std::filesystem;

struct ConfigPaths {
    std::string env;
    std::string aircraft;
    std::string planner;
};

struct Overrides {
    std::string sampler;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> iterations;
    std::optional<double> seconds;
};

struct Loaded {
    Environment env;
    AircraftParams aircraft;
    PlannerConfig planner;
};

void add_planner_option(CLI::App& cmd, ConfigPaths& paths) {
    cmd.add_option("--planner", paths.planner, "Planner config (default: built-in settings)")
        ->envname("SOARPLAN_PLANNER");
}

void add_config_options(CLI::App& cmd, ConfigPaths& paths) {
    cmd.add_option("--env", paths.env, "Environment config (default: built-in benchmark world)")
        ->envname("SOARPLAN_ENV");
    cmd.add_option("--aircraft", paths.aircraft, "Aircraft config (default: built-in airframe)")
        ->envname("SOARPLAN_AIRCRAFT");
    add_planner_option(cmd, paths);
}

void add_overrides(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--sampler", o.sampler, "Control sampler")
        ->check(CLI::IsMember({"primitive", "continuous"}))
        ->envname("SOARPLAN_SAMPLER");
    cmd.add_option("--seed", o.seed, "Random seed (bench: base seed)")->envname("SOARPLAN_SEED");
    auto* iters = cmd.add_option("--iters", o.iterations, "Iteration budget")
                      ->check(CLI::PositiveNumber)
                      ->envname("SOARPLAN_ITERS");
    auto* secs = cmd.add_option("--seconds", o.seconds, "Wall-clock budget [s]")
                     ->check(CLI::PositiveNumber)
                     ->envname("SOARPLAN_SECONDS");
    iters->excludes(secs);
}

void add_out(CLI::App& cmd, std::string& out_dir, const std::string& fallback) {
    out_dir = fallback;
    cmd.add_option("--out", out_dir, "Output directory")->capture_default_str()->envname("SOARPLAN_OUT");
}

/// Loads every config, collecting problems across files before failing.
Loaded load(const ConfigPaths& paths, const Overrides& o) {
    Loaded l;
    l.env = default_environment();
    std::vector<std::string> issues;
    auto attempt = [&issues](auto&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            issues.insert(issues.end(), e.issues().begin(), e.issues().end());
        }
    };
    if (!paths.env.empty()) attempt([&] { l.env = load_environment_file(paths.env); });
    if (!paths.aircraft.empty()) attempt([&] { l.aircraft = load_aircraft_file(paths.aircraft); });
    if (!paths.planner.empty()) attempt([&] { l.planner = load_planner_file(paths.planner); });
    if (!issues.empty()) throw ConfigError(std::move(issues));

    if (!o.sampler.empty()) l.planner.sampler = parse_sampler_kind(o.sampler);
    if (o.seed) l.planner.seed = *o.seed;
    if (o.iterations) l.planner.budget = Budget::of_iterations(*o.iterations);
    if (o.seconds) l.planner.budget = Budget::of_seconds(*o.seconds);
    return l;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
    f.close();
    if (!f) throw std::runtime_error(path.string() + ": cannot write file");
}

int cmd_plan(const ConfigPaths& paths, const Overrides& o, const fs::path& out_dir, bool verbose,
             std::ostream& out, std::ostream& err) {
    Loaded l = load(paths, o);
    if (auto issues = cross_check(l.env, l.aircraft, l.planner); !issues.empty()) {
        throw ConfigError(std::move(issues));
    }
    if (verbose) {
        err << "planning with the " << to_string(l.planner.sampler) << " sampler, seed "
            << l.planner.seed << "\n";
    }
    const PlanResult result = sst_plan(l.env, l.aircraft, l.planner);
    const auto rows = trajectory_rows(result.solution, l.aircraft);

    fs::create_directories(out_dir);
    std::ostringstream csv;
    write_trajectory_csv(csv, rows);
    write_file(out_dir / "trajectory.csv", csv.str());
    write_file(out_dir / "run.json", run_stats_json(result, l.planner));
    write_file(out_dir / "top_view.svg", plot_top_view(rows, l.env));
    write_file(out_dir / "side_view.svg", plot_side_view(rows, l.env));

    out << to_string(result.status) << ": " << result.iterations << " iterations, "
        << result.active_nodes << " active nodes";
    if (result.status == PlanStatus::Solved) {
        out << ", raw cost " << result.solution.raw_cost << ", flight time "
            << result.solution.flight_time << " s";
    }
    out << "\n";
    return result.status == PlanStatus::Solved ? kExitSolved : kExitNoSolution;
}

int cmd_bench(const ConfigPaths& paths, const Overrides& o, int runs, bool serialize, int threads,
              const fs::path& out_dir, bool verbose, std::ostream& out, std::ostream& err) {
    Loaded l = load(paths, o);
    ExperimentSpec spec;
    spec.environment = l.env;
    spec.aircraft = l.aircraft;
    spec.planner = l.planner;
    if (!o.sampler.empty()) spec.samplers = {l.planner.sampler};
    spec.runs = runs;
    spec.base_seed = l.planner.seed;
    spec.serialize = serialize;
    spec.threads = threads;
    if (verbose) {
        err << "running " << spec.runs << " runs for each of " << spec.samplers.size()
            << " sampler(s)\n";
    }
    const ExperimentResult result = run_experiment(spec);
    export_report(result.records, result.summary, out_dir);
    out << format_summary(result.summary);
    return kExitSolved;
}

int cmd_primitives(const ConfigPaths& paths, const fs::path& out_dir, std::ostream& out) {
    PlannerConfig planner;
    if (!paths.planner.empty()) planner = load_planner_file(paths.planner);
    planner.primitives.validate();
    const auto library = enumerate_primitives(planner.primitives);
    fs::create_directories(out_dir);
    std::ostringstream csv;
    write_primitives_csv(csv, library, planner.primitives, planner.substeps_per_step);
    write_file(out_dir / "primitives.csv", csv.str());
    write_file(out_dir / "primitives.svg",
               plot_primitives(library, planner.primitives, planner.substeps_per_step));
    out << library.size() << " primitives written to " << out_dir.string() << "\n";
    return kExitSolved;
}

int cmd_plot(const ConfigPaths& paths, const std::string& trajectory, const fs::path& out_dir,
             std::ostream& out) {
    Environment env = default_environment();
    if (!paths.env.empty()) env = load_environment_file(paths.env);
    std::ifstream in(trajectory, std::ios::binary);
    if (!in) throw ConfigError({trajectory + ": cannot open file"});
    const auto rows = read_trajectory_csv(in);
    fs::create_directories(out_dir);
    write_file(out_dir / "top_view.svg", plot_top_view(rows, env));
    write_file(out_dir / "side_view.svg", plot_side_view(rows, env));
    out << rows.size() << " trajectory rows plotted to " << out_dir.string() << "\n";
    return kExitSolved;
}

int cmd_validate(const ConfigPaths& paths, std::ostream& out, std::ostream& err) {
    std::vector<std::string> issues;
    try {
        Loaded l = load(paths, {});
        issues = cross_check(l.env, l.aircraft, l.planner);
    } catch (const ConfigError& e) {
        issues = e.issues();
    }
    if (issues.empty()) {
        out << "ok\n";
        return kExitSolved;
    }
    for (const auto& issue : issues) err << "error: " << issue << "\n";
    return kExitError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimum-energy kinodynamic path planning for a fixed-wing aircraft in thermals",
                 "soarplan"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "soarplan 0.1.0");
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Progress messages on stderr");

    ConfigPaths paths;
    Overrides overrides;
    std::string out_dir;
    int runs = 30;
    bool serialize = false;
    int threads = 0;
    std::string trajectory;

    auto* plan = app.add_subcommand("plan", "Run one planner and export its solution");
    add_config_options(*plan, paths);
    add_overrides(*plan, overrides);
    add_out(*plan, out_dir, "soarplan-out");

    auto* bench = app.add_subcommand("bench", "Compare samplers over repeated seeded runs");
    add_config_options(*bench, paths);
    add_overrides(*bench, overrides);
    bench->add_option("--runs", runs, "Runs per sampler")
        ->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->envname("SOARPLAN_RUNS");
    bench->add_flag("--serialize", serialize, "One run at a time, for timing fidelity");
    bench->add_option("--threads", threads, "Worker threads (0: one per core)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    add_out(*bench, out_dir, "soarplan-bench");

    auto* prims = app.add_subcommand("primitives", "Export the motion primitive library");
    add_planner_option(*prims, paths);
    add_out(*prims, out_dir, "soarplan-primitives");

    auto* plot = app.add_subcommand("plot", "Render a trajectory CSV as SVG views");
    plot->add_option("trajectory", trajectory, "Trajectory CSV written by plan")->required();
    plot->add_option("--env", paths.env, "Environment config drawn behind the path")
        ->envname("SOARPLAN_ENV");
    add_out(*plot, out_dir, "soarplan-plot");

    auto* validate = app.add_subcommand("validate", "Load and cross-check configs");
    add_config_options(*validate, paths);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitSolved : kExitError;
    }

    try {
        if (*plan) return cmd_plan(paths, overrides, out_dir, verbose, out, err);
        if (*bench) {
            return cmd_bench(paths, overrides, runs, serialize, threads, out_dir, verbose, out, err);
        }
        if (*prims) return cmd_primitives(paths, out_dir, out);
        if (*plot) return cmd_plot(paths, trajectory, out_dir, out);
        if (*validate) return cmd_validate(paths, out, err);
    } catch (const ConfigError& e) {
        for (const auto& issue : e.issues()) err << "error: " << issue << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace soarplan::cli
