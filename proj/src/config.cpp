#include "soarplan/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "soarplan/angles.hpp"
#include "soarplan/format.hpp"

namespace soarplan {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& i : issues) {
        if (!out.empty()) out += "\n";
        out += i;
    }
    return out;
}

struct Entry {
    std::string key;
    std::vector<std::string> values;
    int line = 0;
};

class KeyValueReader {
public:
    KeyValueReader(std::string_view text, std::string_view source) : source_(source) {
        int number = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = std::min(text.find('\n', pos), text.size());
            std::string_view line = text.substr(pos, eol - pos);
            pos = eol + 1;
            ++number;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                error(number, "expected 'key = value'");
                continue;
            }
            Entry e;
            e.key = std::string(trim(line.substr(0, eq)));
            e.line = number;
            std::istringstream values{std::string(trim(line.substr(eq + 1)))};
            for (std::string token; values >> token;) e.values.push_back(token);
            if (e.key.empty()) {
                error(number, "missing key");
                continue;
            }
            entries_.push_back(std::move(e));
        }
    }

    void error(int line, const std::string& message) {
        issues_.push_back(std::string(source_) + ":" + std::to_string(line) + ": " + message);
    }
    void error(const std::string& message) { issues_.push_back(std::string(source_) + ": " + message); }

    std::vector<const Entry*> all(const std::string& key) {
        known_.insert(key);
        std::vector<const Entry*> out;
        for (const auto& e : entries_)
            if (e.key == key) out.push_back(&e);
        return out;
    }

    const Entry* single(const std::string& key, bool required) {
        const auto found = all(key);
        if (found.size() > 1) error(found[1]->line, "duplicate key '" + key + "'");
        if (found.empty()) {
            if (required) error("missing required key '" + key + "'");
            return nullptr;
        }
        return found.front();
    }

    /// Parses exactly `count` numbers; false (with an issue logged) on mismatch.
    bool numbers(const Entry& e, std::size_t count, std::vector<double>& out) {
        out.clear();
        if (e.values.size() != count) {
            error(e.line, "'" + e.key + "' expects " + std::to_string(count) + " value(s), got " +
                              std::to_string(e.values.size()));
            return false;
        }
        for (const auto& v : e.values) {
            const auto d = parse_double(v);
            if (!d || !std::isfinite(*d)) {
                error(e.line, "'" + e.key + "': '" + v + "' is not a finite number");
                return false;
            }
            out.push_back(*d);
        }
        return true;
    }

    void number(const std::string& key, double& target) {
        if (const Entry* e = single(key, false)) {
            std::vector<double> v;
            if (numbers(*e, 1, v)) target = v[0];
        }
    }

    void check_version() {
        const Entry* e = single("version", true);
        if (!e) return;
        if (e->values.size() != 1 || e->values[0] != std::to_string(kConfigVersion)) {
            error(e->line, "unsupported version (expected " + std::to_string(kConfigVersion) + ")");
        }
    }

    /// Flags keys nobody asked for, then throws if anything went wrong.
    void finish() {
        for (const auto& e : entries_)
            if (!known_.count(e.key)) error(e.line, "unknown key '" + e.key + "'");
        if (!issues_.empty()) throw ConfigError(issues_);
    }

private:
    std::string_view source_;
    std::vector<Entry> entries_;
    std::vector<std::string> issues_;
    std::set<std::string> known_;
};

std::string numbers_line(const std::string& key, std::initializer_list<double> values) {
    std::string out = key + " =";
    for (double v : values) out += " " + format_double(v);
    return out + "\n";
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

// ---------------------------------------------------------------------------
// Environment

Environment load_environment(std::string_view text, std::string_view source) {
    KeyValueReader r(text, source);
    r.check_version();
    Environment env;
    std::vector<double> v;

    if (const Entry* e = r.single("ambient_wind", false); e && r.numbers(*e, 3, v)) {
        env.wind.ambient = {v[0], v[1], v[2]};
    }
    if (const Entry* e = r.single("start", true); e && r.numbers(*e, 4, v)) {
        env.start = {v[0], v[1], normalize_angle(v[3]), v[2]};
    }
    if (const Entry* e = r.single("goal", true); e && r.numbers(*e, 4, v)) {
        env.goal = {v[0], v[1], v[2], v[3]};
        if (!(env.goal.radius > 0.0)) r.error(e->line, "goal.radius must be > 0");
    }
    if (const Entry* e = r.single("bounds", true); e && r.numbers(*e, 6, v)) {
        env.bounds = {v[0], v[1], v[2], v[3], v[4], v[5]};
        if (!(v[0] < v[1])) r.error(e->line, "bounds: north_min must be < north_max");
        if (!(v[2] < v[3])) r.error(e->line, "bounds: east_min must be < east_max");
        if (!(v[4] < v[5])) r.error(e->line, "bounds: height_min must be < height_max");
    }
    for (const Entry* e : r.all("thermal")) {
        if (!r.numbers(*e, 6, v)) continue;
        Thermal t{v[0], v[1], v[2], v[3], v[4], v[5]};
        try {
            t.validate();
            env.wind.thermals.push_back(t);
        } catch (const std::invalid_argument& ex) {
            r.error(e->line, ex.what());
        }
    }
    r.finish();
    return env;
}

std::string save_environment(const Environment& env) {
    std::string out = "# soarplan environment\nversion = " + std::to_string(kConfigVersion) + "\n";
    const auto& w = env.wind.ambient;
    out += numbers_line("ambient_wind", {w.north, w.east, w.down});
    out += numbers_line("start", {env.start.north, env.start.east, env.start.height, env.start.course});
    out += numbers_line("goal", {env.goal.north, env.goal.east, env.goal.height, env.goal.radius});
    const auto& b = env.bounds;
    out += numbers_line("bounds", {b.north_min, b.north_max, b.east_min, b.east_max, b.height_min,
                                   b.height_max});
    for (const auto& t : env.wind.thermals) {
        out += numbers_line("thermal", {t.center_north, t.center_east, t.radius, t.core_updraft,
                                        t.base_height, t.top_height});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Aircraft

AircraftParams load_aircraft(std::string_view text, std::string_view source) {
    KeyValueReader r(text, source);
    r.check_version();
    AircraftParams p;
    const std::array<std::pair<const char*, double*>, 9> fields{{
        {"mass", &p.mass},
        {"wing_area", &p.wing_area},
        {"cl0", &p.lift_coefficient},
        {"cd0", &p.zero_lift_drag},
        {"aspect_ratio", &p.aspect_ratio},
        {"oswald", &p.oswald},
        {"eta_ec", &p.eta_ec},
        {"eta_p", &p.eta_p},
        {"gravity", &p.gravity},
    }};
    for (const auto& [key, target] : fields) r.number(key, *target);
    try {
        p.validate();
    } catch (const std::invalid_argument& ex) {
        r.error(ex.what());
    }
    r.finish();
    return p;
}

std::string save_aircraft(const AircraftParams& p) {
    std::string out = "# soarplan aircraft\nversion = " + std::to_string(kConfigVersion) + "\n";
    out += numbers_line("mass", {p.mass});
    out += numbers_line("wing_area", {p.wing_area});
    out += numbers_line("cl0", {p.lift_coefficient});
    out += numbers_line("cd0", {p.zero_lift_drag});
    out += numbers_line("aspect_ratio", {p.aspect_ratio});
    out += numbers_line("oswald", {p.oswald});
    out += numbers_line("eta_ec", {p.eta_ec});
    out += numbers_line("eta_p", {p.eta_p});
    out += numbers_line("gravity", {p.gravity});
    return out;
}

// ---------------------------------------------------------------------------
// Planner

PlannerConfig load_planner(std::string_view text, std::string_view source) {
    KeyValueReader r(text, source);
    r.check_version();
    PlannerConfig cfg;
    std::vector<double> v;

    if (const Entry* e = r.single("sampler", false)) {
        try {
            if (e->values.size() != 1) throw std::invalid_argument("sampler expects one value");
            cfg.sampler = parse_sampler_kind(e->values[0]);
        } catch (const std::invalid_argument& ex) {
            r.error(e->line, ex.what());
        }
    }
    if (const Entry* e = r.single("seed", false)) {
        const auto seed = e->values.size() == 1 ? parse_integer<std::uint64_t>(e->values[0]) : std::nullopt;
        if (seed) cfg.seed = *seed;
        else r.error(e->line, "seed must be a nonnegative integer");
    }
    const Entry* iters = r.single("iterations", false);
    const Entry* secs = r.single("seconds", false);
    if (iters && secs) r.error(secs->line, "set either 'iterations' or 'seconds', not both");
    if (iters) {
        const auto n = iters->values.size() == 1 ? parse_integer<std::int64_t>(iters->values[0]) : std::nullopt;
        if (n) cfg.budget = Budget::of_iterations(*n);
        else r.error(iters->line, "iterations must be an integer");
    } else if (secs && r.numbers(*secs, 1, v)) {
        cfg.budget = Budget::of_seconds(v[0]);
    }
    r.number("selection_radius", cfg.selection_radius);
    r.number("witness_radius", cfg.witness_radius);
    if (const Entry* e = r.single("metric_weights", false); e && r.numbers(*e, 3, v)) {
        cfg.weights = {v[0], v[1], v[2]};
    }
    if (const Entry* e = r.single("cost_offset", false)) {
        if (e->values.size() == 1 && e->values[0] == "auto") {
            cfg.cost_offset.reset();
        } else if (r.numbers(*e, 1, v)) {
            cfg.cost_offset = v[0];
        }
    }
    r.number("min_ground_speed", cfg.min_ground_speed);
    r.number("height_floor", cfg.height_floor);
    r.number("goal_bias", cfg.goal_bias);
    r.number("segment_duration", cfg.primitives.segment_duration);
    for (auto [key, target] : {std::pair{"steps_per_segment", &cfg.primitives.steps},
                               std::pair{"substeps_per_step", &cfg.substeps_per_step}}) {
        if (const Entry* e = r.single(key, false)) {
            const auto n = e->values.size() == 1 ? parse_integer<int>(e->values[0]) : std::nullopt;
            if (n) *target = *n;
            else r.error(e->line, std::string(key) + " must be an integer");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& ex) {
        r.error(ex.what());
    }
    r.finish();
    return cfg;
}

std::string save_planner(const PlannerConfig& cfg) {
    std::string out = "# soarplan planner\nversion = " + std::to_string(kConfigVersion) + "\n";
    out += "sampler = " + std::string(to_string(cfg.sampler)) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    if (cfg.budget.kind == Budget::Kind::Iterations) {
        out += "iterations = " + std::to_string(cfg.budget.iterations) + "\n";
    } else {
        out += numbers_line("seconds", {cfg.budget.seconds});
    }
    out += numbers_line("selection_radius", {cfg.selection_radius});
    out += numbers_line("witness_radius", {cfg.witness_radius});
    out += numbers_line("metric_weights", {cfg.weights.position, cfg.weights.height, cfg.weights.course});
    out += cfg.cost_offset ? numbers_line("cost_offset", {*cfg.cost_offset}) : "cost_offset = auto\n";
    out += numbers_line("min_ground_speed", {cfg.min_ground_speed});
    out += numbers_line("height_floor", {cfg.height_floor});
    out += numbers_line("goal_bias", {cfg.goal_bias});
    out += numbers_line("segment_duration", {cfg.primitives.segment_duration});
    out += "steps_per_segment = " + std::to_string(cfg.primitives.steps) + "\n";
    out += "substeps_per_step = " + std::to_string(cfg.substeps_per_step) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Files and cross checks

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({path.string() + ": cannot open file"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Environment load_environment_file(const std::filesystem::path& path) {
    return load_environment(read_text_file(path), path.string());
}

AircraftParams load_aircraft_file(const std::filesystem::path& path) {
    return load_aircraft(read_text_file(path), path.string());
}

PlannerConfig load_planner_file(const std::filesystem::path& path) {
    return load_planner(read_text_file(path), path.string());
}

Environment default_environment() {
    Environment env;
    env.wind.ambient = {0.0, 0.0, 0.0};
    env.wind.thermals.push_back({600.0, 400.0, 150.0, 3.0, 0.0, 600.0});
    env.start = {0.0, 0.0, 0.0, 200.0};
    env.goal = {1200.0, 800.0, 250.0, 50.0};
    env.bounds = {-150.0, 1350.0, -350.0, 1150.0, 0.0, 600.0};
    return env;
}

std::vector<std::string> cross_check(const Environment& env, const AircraftParams& aircraft,
                                     const PlannerConfig& planner) {
    std::vector<std::string> issues;
    auto guard = [&issues](const char* what, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& ex) {
            issues.push_back(std::string(what) + ": " + ex.what());
        }
    };
    guard("planner", [&] { planner.validate(); });
    guard("aircraft", [&] { aircraft.validate(); });
    guard("environment", [&] { env.wind.validate(); });
    if (!env.bounds.contains(env.goal.north, env.goal.east, env.goal.height)) {
        issues.push_back("goal center lies outside the world bounds");
    }
    if (!env.bounds.contains(env.start)) issues.push_back("start state lies outside the world bounds");
    if (env.start.height < planner.height_floor) issues.push_back("start height is below height_floor");
    return issues;
}

}  // namespace soarplan
