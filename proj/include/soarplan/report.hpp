// Solution and primitive-library export: CSV tables, the run-stats record
// and SVG views.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "soarplan/energy.hpp"
#include "soarplan/planner.hpp"
#include "soarplan/primitives.hpp"

namespace soarplan {

inline constexpr const char* kTrajectorySchema = "soarplan-trajectory v1";
inline constexpr const char* kRunStatsSchema = "soarplan-run/1";
inline constexpr const char* kPrimitivesSchema = "soarplan-primitives v1";

/// One knot of a flown solution. Controls and e_dot belong to the step that
/// starts at the knot; the terminal knot repeats the final step's values.
struct TrajectoryRow {
    double time = 0.0;
    State state;
    ControlInput control;
    int control_id = -1;      // primitive id, -1 for continuous controls
    double step_e_dot = 0.0;  // raw specific energy rate of the step [W/kg]

    friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

std::vector<TrajectoryRow> trajectory_rows(const Solution& solution, const AircraftParams& aircraft);

/// A zero-length solution produces a file with the header lines only.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);
/// Throws std::runtime_error naming the bad line.
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

/// Versioned JSON record of one planning run (deterministic fields plus
/// timing under "timing").
std::string run_stats_json(const PlanResult& result, const PlannerConfig& cfg);

/// Top-down (east right, north up) and side (along-track distance vs height)
/// views of a flown path, with start, goal and thermals drawn in.
std::string plot_top_view(const std::vector<TrajectoryRow>& rows, const Environment& env);
std::string plot_side_view(const std::vector<TrajectoryRow>& rows, const Environment& env);

/// Library table with zero-wind endpoints flown from the origin.
void write_primitives_csv(std::ostream& out, const std::vector<MotionPrimitive>& library,
                          const PrimitiveConfig& cfg, int substeps_per_step = 10);

/// Fan-out of every primitive from the origin, coloured by kind.
std::string plot_primitives(const std::vector<MotionPrimitive>& library, const PrimitiveConfig& cfg,
                            int substeps_per_step = 10);

}  // namespace soarplan
