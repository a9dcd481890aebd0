#include "soarplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "soarplan/angles.hpp"

namespace soarplan {

bool GoalRegion::contains(const State& s) const {
    const double dn = s.north - north;
    const double de = s.east - east;
    const double dh = s.height - height;
    return dn * dn + de * de + dh * dh <= radius * radius;
}

bool WorldBounds::contains(double n, double e, double h) const {
    return n >= north_min && n <= north_max && e >= east_min && e <= east_max && h >= height_min &&
           h <= height_max;
}

bool WorldBounds::contains(const State& s) const { return contains(s.north, s.east, s.height); }

std::string_view to_string(SamplerKind kind) {
    return kind == SamplerKind::Primitive ? "primitive" : "continuous";
}

SamplerKind parse_sampler_kind(std::string_view text) {
    if (text == "primitive") return SamplerKind::Primitive;
    if (text == "continuous") return SamplerKind::Continuous;
    throw std::invalid_argument("sampler must be 'primitive' or 'continuous' (got '" +
                                std::string(text) + "')");
}

std::string_view to_string(PlanStatus status) {
    return status == PlanStatus::Solved ? "solved" : "no_solution";
}

void PlannerConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (!(selection_radius > 0.0)) fail("selection_radius must be > 0");
    if (!(witness_radius > 0.0)) fail("witness_radius must be > 0");
    if (!(witness_radius < selection_radius)) fail("witness_radius must be < selection_radius");
    if (budget.kind == Budget::Kind::Iterations && budget.iterations <= 0) {
        fail("iterations must be > 0");
    }
    if (budget.kind == Budget::Kind::Seconds && !(budget.seconds > 0.0)) {
        fail("seconds must be > 0");
    }
    if (!(weights.position > 0.0) || !(weights.height > 0.0) || weights.course < 0.0) {
        fail("metric_weights must be positive");
    }
    if (cost_offset && !std::isfinite(*cost_offset)) fail("cost_offset must be finite");
    if (!(min_ground_speed > 0.0)) fail("min_ground_speed must be > 0");
    if (!std::isfinite(height_floor)) fail("height_floor must be finite");
    if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) fail("goal_bias must be in [0, 1]");
    if (substeps_per_step < 1) fail("substeps_per_step must be >= 1");
    primitives.validate();
}

// ---------------------------------------------------------------------------
// SearchTree

SearchTree::SearchTree(const MetricWeights& weights, double selection_radius)
    : active_(weights, selection_radius), weights_(weights) {}

int SearchTree::add_root(const State& s) {
    if (!nodes_.empty()) throw std::logic_error("search tree already has a root");
    TreeNode root;
    root.id = 0;
    root.state = s;
    root.state.course = normalize_angle(s.course);
    nodes_.push_back(root);
    active_.insert(0, nodes_.back().state);
    ++live_;
    return 0;
}

int SearchTree::add(Candidate c) {
    if (c.parent < 0 || c.parent >= static_cast<int>(nodes_.size()) ||
        nodes_[static_cast<std::size_t>(c.parent)].removed) {
        throw std::logic_error("search tree: candidate parent is not in the tree");
    }
    TreeNode& parent = nodes_[static_cast<std::size_t>(c.parent)];
    TreeNode n;
    n.id = static_cast<int>(nodes_.size());
    n.state = c.segment.end();
    n.parent = c.parent;
    n.control_id = c.control_id;
    n.cost = parent.cost + c.edge_cost;
    n.raw_cost = parent.raw_cost + c.edge_raw_cost;
    n.flight_time = parent.flight_time + c.segment.duration();
    n.depth = parent.depth + 1;
    n.segment = std::move(c.segment);
    ++parent.children;
    nodes_.push_back(std::move(n));
    active_.insert(nodes_.back().id, nodes_.back().state);
    ++live_;
    return nodes_.back().id;
}

void SearchTree::deactivate(int id) {
    TreeNode& n = nodes_.at(static_cast<std::size_t>(id));
    if (!n.active) return;
    n.active = false;
    active_.erase(id, n.state);
}

int SearchTree::prune_leaf_chain(int id) {
    int removed = 0;
    while (id > 0) {
        TreeNode& n = nodes_[static_cast<std::size_t>(id)];
        if (n.active || n.children > 0 || n.removed) break;
        n.removed = true;
        n.segment = TrajectorySegment{};
        --live_;
        ++removed;
        const int parent = n.parent;
        --nodes_[static_cast<std::size_t>(parent)].children;
        id = parent;
    }
    return removed;
}

int SearchTree::best_near(const State& x, double radius) const {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    active_.for_each_within(x, radius, [&](int id, const State&, double) {
        const double c = nodes_[static_cast<std::size_t>(id)].cost;
        if (c < best_cost || (c == best_cost && id < best)) {
            best_cost = c;
            best = id;
        }
    });
    return best >= 0 ? best : nearest_active(x);
}

int SearchTree::nearest_active(const State& x) const { return active_.nearest(x).first; }

// ---------------------------------------------------------------------------
// WitnessSet

WitnessSet::WitnessSet(const MetricWeights& weights, double radius)
    : index_(weights, radius), weights_(weights), radius_(radius) {}

int WitnessSet::nearest_within(const State& x) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    index_.for_each_within(x, radius_, [&](int id, const State&, double d) {
        if (d < best_d || (d == best_d && id < best)) {
            best_d = d;
            best = id;
        }
    });
    return best;
}

int WitnessSet::add(const State& position, int representative) {
    const int id = static_cast<int>(witnesses_.size());
    witnesses_.push_back({position, representative});
    index_.insert(id, position);
    return id;
}

WitnessOutcome witness_update(WitnessSet& witnesses, SearchTree& tree,
                              SearchTree::Candidate candidate) {
    WitnessOutcome out;
    const State end = candidate.segment.end();
    const double cost = tree.node(candidate.parent).cost + candidate.edge_cost;

    const int w = witnesses.nearest_within(end);
    if (w < 0) {
        out.node = tree.add(std::move(candidate));
        out.witness = witnesses.add(tree.node(out.node).state, out.node);
        out.accepted = true;
        return out;
    }
    const int rep = witnesses[w].representative;
    if (rep >= 0 && !(cost < tree.node(rep).cost)) return out;

    out.node = tree.add(std::move(candidate));
    out.witness = w;
    out.accepted = true;
    witnesses[w].representative = out.node;
    if (rep >= 0) {
        out.replaced = rep;
        tree.deactivate(rep);
        out.pruned = tree.prune_leaf_chain(rep);
    }
    return out;
}

Solution extract_solution(const SearchTree& tree, int goal_node) {
    Solution sol;
    const TreeNode& goal = tree.node(goal_node);
    sol.raw_cost = goal.raw_cost;
    sol.offset_cost = goal.cost;
    sol.flight_time = goal.flight_time;
    sol.depth = goal.depth;

    std::vector<int> chain;
    for (int id = goal_node; id > 0;) {
        const TreeNode& n = tree.node(id);
        if (n.removed || n.parent < 0) throw std::logic_error("extract_solution: dangling parent link");
        chain.push_back(id);
        id = n.parent;
    }
    std::reverse(chain.begin(), chain.end());
    for (int id : chain) {
        const TreeNode& n = tree.node(id);
        sol.segments.push_back(n.segment);
        sol.control_ids.push_back(n.control_id);
        sol.segment_raw_costs.push_back(n.raw_cost - tree.node(n.parent).raw_cost);
    }
    return sol;
}

// ---------------------------------------------------------------------------
// SstPlanner

std::unique_ptr<ControlSampler> make_sampler(SamplerKind kind, const PrimitiveConfig& cfg) {
    if (kind == SamplerKind::Primitive) {
        return std::make_unique<PrimitiveSampler>(enumerate_primitives(cfg), cfg);
    }
    return std::make_unique<ContinuousSampler>(ControlEnvelope::for_config(cfg), cfg);
}

SstPlanner::SstPlanner(Environment env, AircraftParams aircraft, PlannerConfig cfg)
    : SstPlanner(std::move(env), aircraft, cfg, make_sampler(cfg.sampler, cfg.primitives)) {}

SstPlanner::SstPlanner(Environment env, AircraftParams aircraft, PlannerConfig cfg,
                       std::unique_ptr<ControlSampler> sampler)
    : env_(std::move(env)),
      aircraft_(aircraft),
      cfg_(cfg),
      sampler_(std::move(sampler)),
      rng_(cfg.seed),
      tree_(cfg.weights, cfg.selection_radius),
      witnesses_(cfg.weights, cfg.witness_radius) {
    cfg_.validate();
    aircraft_.validate();
    env_.wind.validate();
    if (!sampler_) throw std::invalid_argument("planner needs a control sampler");

    cost_options_.min_ground_speed = cfg_.min_ground_speed;
    cost_options_.cost_offset =
        cfg_.cost_offset.value_or(cost_offset_bound(env_.wind, ControlEnvelope::for_config(cfg_.primitives),
                                                    cfg_.primitives, cfg_.substeps_per_step,
                                                    aircraft_.gravity));
    propagation_.substeps_per_step = cfg_.substeps_per_step;
    propagation_.height_floor = cfg_.height_floor;

    const int root = tree_.add_root(env_.start);
    witnesses_.add(tree_.node(root).state, root);
    if (env_.goal.contains(tree_.node(root).state)) {
        best_goal_ = root;
        best_cost_ = 0.0;
    }
}

std::optional<double> SstPlanner::best_cost() const {
    if (!best_goal_) return std::nullopt;
    return best_cost_;
}

State SstPlanner::sample_state() {
    const WorldBounds& b = env_.bounds;
    State s;
    if (rng_.uniform01() < cfg_.goal_bias) {
        const GoalRegion& g = env_.goal;
        double dn, de, dh;
        do {
            dn = rng_.uniform(-1.0, 1.0);
            de = rng_.uniform(-1.0, 1.0);
            dh = rng_.uniform(-1.0, 1.0);
        } while (dn * dn + de * de + dh * dh > 1.0);
        s.north = g.north + g.radius * dn;
        s.east = g.east + g.radius * de;
        s.height = g.height + g.radius * dh;
    } else {
        s.north = rng_.uniform(b.north_min, b.north_max);
        s.east = rng_.uniform(b.east_min, b.east_max);
        s.height = rng_.uniform(b.height_min, b.height_max);
    }
    s.course = rng_.uniform(-kPi, kPi);
    return s;
}

void SstPlanner::step() {
    ++iterations_;
    const State target = sample_state();
    const int selected = tree_.best_near(target, cfg_.selection_radius);
    const SampledControl control = sampler_->sample(rng_);
    if (selected < 0) return;

    auto segment = propagate(tree_.node(selected).state, *control.sequence, env_.wind, propagation_);
    if (!segment) return;
    for (const TimedState& ts : segment->states) {
        if (!env_.bounds.contains(ts.state)) return;
    }

    SegmentEnergy energy;
    try {
        energy = segment_cost(*segment, aircraft_, cost_options_);
    } catch (const DegenerateSegment&) {
        return;
    }

    SearchTree::Candidate candidate{selected, std::move(*segment), control.primitive_id,
                                    energy.offset_cost, energy.raw_cost};
    const WitnessOutcome outcome = witness_update(witnesses_, tree_, std::move(candidate));
    if (!outcome.accepted) return;
    if (outcome.replaced >= 0) ++prunes_;

    const TreeNode& added = tree_.node(outcome.node);
    if (env_.goal.contains(added.state) && (!best_goal_ || added.cost < best_cost_)) {
        best_goal_ = added.id;
        best_cost_ = added.cost;
        best_solution_ = extract_solution(tree_, added.id);
    }
}

PlanResult SstPlanner::run() {
    using clock = std::chrono::steady_clock;
    // A start inside the goal is already the optimal (zero-length) answer.
    if (best_goal_ && *best_goal_ == 0) return make_result();

    const auto loop_start = clock::now();
    auto last = loop_start;
    auto done = [&] {
        if (cfg_.budget.kind == Budget::Kind::Iterations) return iterations_ >= cfg_.budget.iterations;
        return std::chrono::duration<double>(last - loop_start).count() >= cfg_.budget.seconds;
    };
    while (!done()) {
        step();
        const auto now = clock::now();
        max_iteration_seconds_ =
            std::max(max_iteration_seconds_, std::chrono::duration<double>(now - last).count());
        last = now;
    }
    loop_seconds_ = std::chrono::duration<double>(last - loop_start).count();
    return make_result();
}

PlanResult SstPlanner::make_result() const {
    PlanResult r;
    r.status = best_goal_ ? PlanStatus::Solved : PlanStatus::NoSolution;
    r.solution = best_solution_;
    r.iterations = iterations_;
    r.active_nodes = tree_.active_count();
    r.tree_nodes = tree_.live_count();
    r.witnesses = witnesses_.size();
    r.cost_offset = cost_options_.cost_offset;
    r.loop_seconds = loop_seconds_;
    r.mean_iteration_seconds = iterations_ > 0 ? loop_seconds_ / static_cast<double>(iterations_) : 0.0;
    r.max_iteration_seconds = max_iteration_seconds_;
    return r;
}

PlanResult sst_plan(const Environment& env, const AircraftParams& aircraft,
                    const PlannerConfig& cfg) {
    SstPlanner planner(env, aircraft, cfg);
    return planner.run();
}

}  // namespace soarplan
