// Versioned key/value configuration files.
//
// Each file is a list of `key = value...` lines; `#` starts a comment and list
// entries (e.g. `thermal`) may repeat. Every file must carry `version = 1`.
//
// Environment:
//   ambient_wind = <north> <east> <down>                  [m/s], optional
//   start        = <north> <east> <height> <course>       [m, m, m, rad]
//   goal         = <north> <east> <height> <radius>       [m]
//   bounds       = <n_min> <n_max> <e_min> <e_max> <h_min> <h_max>
//   thermal      = <north> <east> <radius> <core_updraft> <base> <top>   (repeatable)
//
// Aircraft: mass, wing_area, cl0, cd0, aspect_ratio, oswald, eta_ec, eta_p, gravity.
//
// Planner: sampler, seed, iterations | seconds, selection_radius,
//   witness_radius, metric_weights (3 values), cost_offset (number | auto),
//   min_ground_speed, height_floor, goal_bias, segment_duration,
//   steps_per_segment, substeps_per_step.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "soarplan/energy.hpp"
#include "soarplan/planner.hpp"

namespace soarplan {

inline constexpr int kConfigVersion = 1;

/// Carries every problem found in one file, each prefixed with source:line.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

Environment load_environment(std::string_view text, std::string_view source = "<environment>");
std::string save_environment(const Environment& env);

AircraftParams load_aircraft(std::string_view text, std::string_view source = "<aircraft>");
std::string save_aircraft(const AircraftParams& params);

PlannerConfig load_planner(std::string_view text, std::string_view source = "<planner>");
std::string save_planner(const PlannerConfig& cfg);

/// Throws ConfigError naming the path when it cannot be read.
std::string read_text_file(const std::filesystem::path& path);

Environment load_environment_file(const std::filesystem::path& path);
AircraftParams load_aircraft_file(const std::filesystem::path& path);
PlannerConfig load_planner_file(const std::filesystem::path& path);

/// Default benchmark world: 1500 x 1500 x 600 m with one thermal
/// between the start and the goal.
Environment default_environment();

/// Cross-file consistency checks; returns an empty list when all is well.
std::vector<std::string> cross_check(const Environment& env, const AircraftParams& aircraft,
                                     const PlannerConfig& planner);

}  // namespace soarplan
