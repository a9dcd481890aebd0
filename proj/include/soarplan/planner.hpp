// Stable Sparse RRT over the (north, east, course, height) state space.
//
// Each iteration samples a random state, selects the cheapest active node
// near it, propagates a randomly drawn control for one segment duration and
// keeps the result only if it is the cheapest node around its witness.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "soarplan/dynamics.hpp"
#include "soarplan/energy.hpp"
#include "soarplan/primitives.hpp"
#include "soarplan/random.hpp"
#include "soarplan/spatial_index.hpp"
#include "soarplan/wind.hpp"

namespace soarplan {

struct GoalRegion {
    double north = 0.0;
    double east = 0.0;
    double height = 0.0;
    double radius = 1.0;  // > 0

    /// Position-only test; course is unconstrained.
    bool contains(const State& s) const;
    friend bool operator==(const GoalRegion&, const GoalRegion&) = default;
};

struct WorldBounds {
    double north_min = 0.0, north_max = 0.0;
    double east_min = 0.0, east_max = 0.0;
    double height_min = 0.0, height_max = 0.0;

    bool contains(const State& s) const;
    bool contains(double north, double east, double height) const;
    friend bool operator==(const WorldBounds&, const WorldBounds&) = default;
};

/// Everything a planning query needs besides the aircraft and planner knobs.
struct Environment {
    WindField wind;
    State start;
    GoalRegion goal;
    WorldBounds bounds;

    friend bool operator==(const Environment&, const Environment&) = default;
};

enum class SamplerKind { Primitive, Continuous };

std::string_view to_string(SamplerKind kind);
/// Throws std::invalid_argument on anything but "primitive" / "continuous".
SamplerKind parse_sampler_kind(std::string_view text);

struct Budget {
    enum class Kind { Iterations, Seconds };
    Kind kind = Kind::Iterations;
    std::int64_t iterations = 200000;
    double seconds = 20.0;

    static Budget of_iterations(std::int64_t n) { return {Kind::Iterations, n, 0.0}; }
    static Budget of_seconds(double s) { return {Kind::Seconds, 0, s}; }
    /// Compares only the field the kind selects.
    friend bool operator==(const Budget& a, const Budget& b) {
        if (a.kind != b.kind) return false;
        return a.kind == Kind::Iterations ? a.iterations == b.iterations : a.seconds == b.seconds;
    }
};

struct PlannerConfig {
    double selection_radius = 60.0;  // delta_BN
    double witness_radius = 30.0;    // delta_s
    SamplerKind sampler = SamplerKind::Primitive;
    std::uint64_t seed = 1;
    Budget budget;
    MetricWeights weights;
    /// Per-metre edge-cost offset; unset means derive it with cost_offset_bound.
    std::optional<double> cost_offset;
    double min_ground_speed = 0.1;  // [m/s]
    double height_floor = 0.0;      // [m]
    double goal_bias = 0.05;
    PrimitiveConfig primitives;
    int substeps_per_step = 10;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
    friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

struct TreeNode {
    int id = 0;
    State state;
    int parent = -1;  // -1 for the root
    TrajectorySegment segment;  // empty for the root
    int control_id = -1;        // primitive id, -1 for continuous controls and the root
    double cost = 0.0;          // offset cost from the start
    double raw_cost = 0.0;      // raw energy cost from the start
    double flight_time = 0.0;   // [s]
    int depth = 0;
    int children = 0;
    bool active = true;
    bool removed = false;  // pruned out of the tree
};

/// Node storage plus a spatial index over the active nodes.
class SearchTree {
public:
    SearchTree(const MetricWeights& weights, double selection_radius);

    int add_root(const State& s);

    struct Candidate {
        int parent = -1;
        TrajectorySegment segment;
        int control_id = -1;
        double edge_cost = 0.0;
        double edge_raw_cost = 0.0;
    };
    int add(Candidate candidate);

    /// Removes the node from the active set; it stays in the tree while it
    /// has children.
    void deactivate(int id);

    /// Removes inactive childless nodes starting at `id` and walking towards
    /// the root. Returns the number of nodes removed.
    int prune_leaf_chain(int id);

    /// Cheapest active node within `radius` of x (ties by lowest id), or the
    /// nearest active node when none is in range.
    int best_near(const State& x, double radius) const;
    int nearest_active(const State& x) const;

    const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t active_count() const { return active_.size(); }
    std::size_t live_count() const { return live_; }
    const MetricWeights& weights() const { return weights_; }

private:
    std::vector<TreeNode> nodes_;
    SpatialIndex active_;
    MetricWeights weights_;
    std::size_t live_ = 0;
};

struct Witness {
    State position;
    int representative = -1;
};

class WitnessSet {
public:
    WitnessSet(const MetricWeights& weights, double radius);

    /// Nearest witness within the witness radius, or -1.
    int nearest_within(const State& x) const;
    int add(const State& position, int representative);

    Witness& operator[](int id) { return witnesses_[static_cast<std::size_t>(id)]; }
    const Witness& operator[](int id) const { return witnesses_[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return witnesses_.size(); }
    const std::vector<Witness>& all() const { return witnesses_; }
    double radius() const { return radius_; }

private:
    std::vector<Witness> witnesses_;
    SpatialIndex index_;
    MetricWeights weights_;
    double radius_;
};

struct WitnessOutcome {
    bool accepted = false;
    int node = -1;        // id of the new node when accepted
    int witness = -1;
    int replaced = -1;    // previous representative that was deactivated
    int pruned = 0;       // nodes removed from the tree
};

/// Locally-best check and sparsification. Adds the candidate to the tree when
/// it has no witness within the witness radius (a new witness is created) or
/// when it is cheaper than that witness's representative, which is then
/// deactivated and pruned if it is a leaf. Otherwise leaves the tree alone.
WitnessOutcome witness_update(WitnessSet& witnesses, SearchTree& tree,
                              SearchTree::Candidate candidate);

struct Solution {
    std::vector<TrajectorySegment> segments;
    std::vector<int> control_ids;
    std::vector<double> segment_raw_costs;
    double raw_cost = 0.0;
    double offset_cost = 0.0;
    double flight_time = 0.0;
    int depth = 0;
};

/// Walks parent links from `goal_node` to the root and returns the segments in
/// flight order.
Solution extract_solution(const SearchTree& tree, int goal_node);

enum class PlanStatus { Solved, NoSolution };

std::string_view to_string(PlanStatus status);

struct PlanResult {
    PlanStatus status = PlanStatus::NoSolution;
    Solution solution;
    std::int64_t iterations = 0;
    std::size_t active_nodes = 0;
    std::size_t tree_nodes = 0;
    std::size_t witnesses = 0;
    double cost_offset = 0.0;
    double loop_seconds = 0.0;           // time spent in the iteration loop
    double mean_iteration_seconds = 0.0;
    double max_iteration_seconds = 0.0;
};

std::unique_ptr<ControlSampler> make_sampler(SamplerKind kind, const PrimitiveConfig& cfg);

/// A single SST run. Single-threaded; every run owns its tree, witnesses,
/// sampler and random source.
class SstPlanner {
public:
    SstPlanner(Environment env, AircraftParams aircraft, PlannerConfig cfg);
    SstPlanner(Environment env, AircraftParams aircraft, PlannerConfig cfg,
               std::unique_ptr<ControlSampler> sampler);

    /// One sample/select/propagate/prune iteration.
    void step();
    /// Iterates until the configured budget is exhausted.
    PlanResult run();

    const SearchTree& tree() const { return tree_; }
    const WitnessSet& witnesses() const { return witnesses_; }
    std::int64_t iterations() const { return iterations_; }
    bool solved() const { return best_goal_.has_value(); }
    /// Offset cost of the best goal-reaching node found so far.
    std::optional<double> best_cost() const;
    const Solution& best_solution() const { return best_solution_; }
    double cost_offset() const { return cost_options_.cost_offset; }
    const Environment& environment() const { return env_; }
    std::int64_t prunes() const { return prunes_; }

private:
    State sample_state();
    PlanResult make_result() const;

    Environment env_;
    AircraftParams aircraft_;
    PlannerConfig cfg_;
    std::unique_ptr<ControlSampler> sampler_;
    Rng rng_;
    SearchTree tree_;
    WitnessSet witnesses_;
    CostOptions cost_options_;
    PropagationOptions propagation_;
    std::int64_t iterations_ = 0;
    std::int64_t prunes_ = 0;
    std::optional<int> best_goal_;
    double best_cost_ = 0.0;
    Solution best_solution_;
    double loop_seconds_ = 0.0;
    double max_iteration_seconds_ = 0.0;
};

PlanResult sst_plan(const Environment& env, const AircraftParams& aircraft,
                    const PlannerConfig& cfg);

}  // namespace soarplan
