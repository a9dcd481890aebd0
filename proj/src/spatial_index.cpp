#include "soarplan/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "soarplan/angles.hpp"

namespace soarplan {

namespace {

constexpr std::int64_t kKeyOffset = std::int64_t{1} << 20;
constexpr std::size_t kBruteForceLimit = 32;

}  // namespace

SpatialIndex::SpatialIndex(const MetricWeights& weights, double cell_size)
    : weights_(weights),
      cell_size_(cell_size),
      scale_position_(std::sqrt(weights.position)),
      scale_height_(std::sqrt(weights.height)) {
    if (!(cell_size > 0.0)) throw std::invalid_argument("spatial index cell size must be > 0");
    if (!(weights.position > 0.0) || !(weights.height > 0.0) || weights.course < 0.0) {
        throw std::invalid_argument("metric weights must be positive");
    }
}

SpatialIndex::Cell SpatialIndex::cell_of(const State& s) const {
    return {static_cast<std::int64_t>(std::floor(scale_position_ * s.north / cell_size_)),
            static_cast<std::int64_t>(std::floor(scale_position_ * s.east / cell_size_)),
            static_cast<std::int64_t>(std::floor(scale_height_ * s.height / cell_size_))};
}

std::uint64_t SpatialIndex::key(std::int64_t i, std::int64_t j, std::int64_t k) {
    auto part = [](std::int64_t v) {
        return static_cast<std::uint64_t>(std::clamp<std::int64_t>(v + kKeyOffset, 0, 2 * kKeyOffset - 1));
    };
    return (part(i) << 42) | (part(j) << 21) | part(k);
}

void SpatialIndex::insert(int id, const State& s) {
    const Cell c = cell_of(s);
    cells_[key(c.i, c.j, c.k)].push_back({id, s});
    if (size_ == 0) {
        lo_ = hi_ = c;
    } else {
        lo_ = {std::min(lo_.i, c.i), std::min(lo_.j, c.j), std::min(lo_.k, c.k)};
        hi_ = {std::max(hi_.i, c.i), std::max(hi_.j, c.j), std::max(hi_.k, c.k)};
    }
    ++size_;
}

bool SpatialIndex::erase(int id, const State& s) {
    const Cell c = cell_of(s);
    auto it = cells_.find(key(c.i, c.j, c.k));
    if (it == cells_.end()) return false;
    auto& entries = it->second;
    auto pos = std::find_if(entries.begin(), entries.end(), [id](const Entry& e) { return e.id == id; });
    if (pos == entries.end()) return false;
    *pos = entries.back();
    entries.pop_back();
    if (entries.empty()) cells_.erase(it);
    --size_;
    return true;
}

std::pair<int, double> SpatialIndex::nearest(const State& x) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    auto consider = [&](const Entry& e) {
        const double d = metric(x, e.state);
        if (d < best_d || (d == best_d && e.id < best)) {
            best_d = d;
            best = e.id;
        }
    };
    if (size_ == 0) return {best, best_d};
    if (size_ <= kBruteForceLimit) {
        for (const auto& [k, entries] : cells_)
            for (const Entry& e : entries) consider(e);
        return {best, best_d};
    }

    const Cell c = cell_of(x);
    auto visit = [&](std::int64_t i, std::int64_t j, std::int64_t k) {
        if (i < lo_.i || i > hi_.i || j < lo_.j || j > hi_.j || k < lo_.k || k > hi_.k) return;
        auto it = cells_.find(key(i, j, k));
        if (it == cells_.end()) return;
        for (const Entry& e : it->second) consider(e);
    };
    // Rings of increasing Chebyshev radius in cell units. Anything in ring
    // r + 1 is at least r cells away along one axis.
    const std::int64_t max_ring =
        std::max({std::abs(c.i - lo_.i), std::abs(c.i - hi_.i), std::abs(c.j - lo_.j),
                  std::abs(c.j - hi_.j), std::abs(c.k - lo_.k), std::abs(c.k - hi_.k)});
    for (std::int64_t r = 0; r <= max_ring; ++r) {
        const std::int64_t i0 = std::max(c.i - r, lo_.i), i1 = std::min(c.i + r, hi_.i);
        const std::int64_t j0 = std::max(c.j - r, lo_.j), j1 = std::min(c.j + r, hi_.j);
        const std::int64_t k0 = std::max(c.k - r, lo_.k), k1 = std::min(c.k + r, hi_.k);
        for (std::int64_t i = i0; i <= i1; ++i) {
            for (std::int64_t j = j0; j <= j1; ++j) {
                if (std::abs(i - c.i) == r || std::abs(j - c.j) == r) {
                    for (std::int64_t k = k0; k <= k1; ++k) visit(i, j, k);
                } else {
                    visit(i, j, c.k - r);
                    if (r > 0) visit(i, j, c.k + r);
                }
            }
        }
        // Strict inequality keeps equal-distance entries in the next ring
        // eligible for the lowest-id tie break.
        if (best >= 0 && best_d < static_cast<double>(r) * cell_size_) break;
    }
    return {best, best_d};
}

}  // namespace soarplan
