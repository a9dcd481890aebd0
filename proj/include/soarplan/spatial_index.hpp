#pragma once

#include <cstdint>
#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <utility>
#include <vector>

#include "soarplan/angles.hpp"
#include "soarplan/dynamics.hpp"

namespace soarplan {

/// Weights of the planner's state metric [m^2 per unit^2].
struct MetricWeights {
    double position = 1.0;
    double height = 1.0;
    double course = 25.0;  // [m^2 / rad^2]

    friend bool operator==(const MetricWeights&, const MetricWeights&) = default;
};

/// Weighted Euclidean distance over (north, east, height) plus the wrapped
/// course difference.
inline double distance(const State& a, const State& b, const MetricWeights& weights) {
    const double dn = a.north - b.north;
    const double de = a.east - b.east;
    const double dh = a.height - b.height;
    const double dc = abs_angle_difference(a.course, b.course);
    return std::sqrt(weights.position * (dn * dn + de * de) + weights.height * dh * dh +
                     weights.course * dc * dc);
}

/// Uniform hash grid over the weighted (north, east, height) coordinates.
///
/// The course term of the metric is nonnegative, so distances in the scaled
/// position space are lower bounds on the full metric and the grid can prune
/// cells without looking at course.
class SpatialIndex {
public:
    SpatialIndex(const MetricWeights& weights, double cell_size);

    void insert(int id, const State& s);
    /// Returns false if the id was not stored at that state's cell.
    bool erase(int id, const State& s);

    /// Calls fn(id, state, distance) for every entry within `radius`.
    template <typename Fn>
    void for_each_within(const State& x, double radius, Fn&& fn) const;

    /// Nearest entry (ties by lowest id); {-1, inf} when empty.
    std::pair<int, double> nearest(const State& x) const;

    std::size_t size() const { return size_; }

private:
    struct Entry {
        int id;
        State state;
    };
    struct Cell {
        std::int64_t i, j, k;
    };

    Cell cell_of(const State& s) const;
    static std::uint64_t key(std::int64_t i, std::int64_t j, std::int64_t k);
    double metric(const State& a, const State& b) const { return distance(a, b, weights_); }

    std::unordered_map<std::uint64_t, std::vector<Entry>> cells_;
    MetricWeights weights_;
    double cell_size_;
    double scale_position_;
    double scale_height_;
    std::size_t size_ = 0;
    Cell lo_{0, 0, 0};
    Cell hi_{-1, -1, -1};
};

template <typename Fn>
void SpatialIndex::for_each_within(const State& x, double radius, Fn&& fn) const {
    if (size_ == 0) return;
    const Cell c = cell_of(x);
    const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_size_));
    const double r2 = radius * radius;
    for (std::int64_t i = std::max(c.i - reach, lo_.i); i <= std::min(c.i + reach, hi_.i); ++i)
        for (std::int64_t j = std::max(c.j - reach, lo_.j); j <= std::min(c.j + reach, hi_.j); ++j)
            for (std::int64_t k = std::max(c.k - reach, lo_.k); k <= std::min(c.k + reach, hi_.k); ++k) {
                auto it = cells_.find(key(i, j, k));
                if (it == cells_.end()) continue;
                for (const Entry& e : it->second) {
                    const double dn = x.north - e.state.north;
                    const double de = x.east - e.state.east;
                    const double dh = x.height - e.state.height;
                    const double pos2 = weights_.position * (dn * dn + de * de) + weights_.height * dh * dh;
                    if (pos2 > r2) continue;
                    const double d = metric(x, e.state);
                    if (d <= radius) fn(e.id, e.state, d);
                }
            }
}

}  // namespace soarplan
