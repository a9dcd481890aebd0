// Independent recomputation of the bench summary, for cross-checking.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "soarplan/bench.hpp"

namespace soarplan::testing {

struct OracleStats {
    std::size_t count = 0;
    std::optional<double> mean;
    std::optional<double> std_dev;
};

/// Welford's online update in long double; a different algorithm from the
/// two-pass one under test.
inline OracleStats oracle_stats(const std::vector<double>& xs) {
    OracleStats s;
    long double mean = 0.0L, m2 = 0.0L;
    std::size_t n = 0;
    for (double x : xs) {
        ++n;
        const long double d = static_cast<long double>(x) - mean;
        mean += d / static_cast<long double>(n);
        m2 += d * (static_cast<long double>(x) - mean);
    }
    s.count = n;
    if (n > 0) s.mean = static_cast<double>(mean);
    if (n > 1) s.std_dev = static_cast<double>(std::sqrt(m2 / static_cast<long double>(n - 1)));
    return s;
}

inline bool close(std::optional<double> a, std::optional<double> b, double rel = 1e-12) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return std::abs(*a - *b) <= rel * std::max(1.0, std::max(std::abs(*a), std::abs(*b)));
}

/// Compares one sampler's summary with a brute-force recomputation over the
/// raw records. Returns a description of the first mismatch, or "".
inline std::string check_summary_against_oracle(const std::vector<RunRecord>& records,
                                                const SummaryStats& stats) {
    for (const SamplerSummary& s : stats.samplers) {
        std::vector<double> raw, offset, flight, iters_solved, iters_all, rate;
        std::size_t runs = 0, solved = 0;
        for (const RunRecord& r : records) {
            if (r.sampler != s.sampler) continue;
            ++runs;
            iters_all.push_back(static_cast<double>(r.iterations));
            rate.push_back(r.loop_seconds > 0.0 ? static_cast<double>(r.iterations) / r.loop_seconds : 0.0);
            if (r.status != PlanStatus::Solved) continue;
            ++solved;
            raw.push_back(*r.raw_cost);
            offset.push_back(*r.offset_cost);
            flight.push_back(*r.flight_time);
            iters_solved.push_back(static_cast<double>(r.iterations));
        }
        const std::string who = std::string(to_string(s.sampler)) + ": ";
        if (s.runs != runs || s.solved != solved) return who + "run counts differ";
        if (std::abs(s.success_rate - static_cast<double>(solved) / static_cast<double>(runs)) > 1e-15) {
            return who + "success rate differs";
        }
        const std::pair<const char*, std::pair<const MetricStats*, std::vector<double>*>> metrics[] = {
            {"raw_cost", {&s.raw_cost, &raw}},
            {"offset_cost", {&s.offset_cost, &offset}},
            {"flight_time", {&s.flight_time, &flight}},
            {"iterations", {&s.iterations, &iters_solved}},
            {"iterations_all", {&s.iterations_all, &iters_all}},
            {"iterations_per_second", {&s.iterations_per_second, &rate}},
        };
        for (const auto& [name, pair] : metrics) {
            const OracleStats o = oracle_stats(*pair.second);
            const MetricStats& m = *pair.first;
            if (m.count != o.count || !close(m.mean, o.mean) || !close(m.std_dev, o.std_dev)) {
                return who + name + " differs from the oracle";
            }
        }
    }
    const SamplerSummary* p = stats.find(SamplerKind::Primitive);
    const SamplerSummary* c = stats.find(SamplerKind::Continuous);
    if (p && c) {
        if (!stats.comparison) return "comparison missing";
        auto ratio = [](const MetricStats& num, const MetricStats& den) -> std::optional<double> {
            if (!num.mean || !den.mean || *den.mean == 0.0) return std::nullopt;
            return *num.mean / *den.mean;
        };
        const SamplerComparison& cmp = *stats.comparison;
        if (!close(cmp.iteration_ratio, ratio(p->iterations_all, c->iterations_all)) ||
            !close(cmp.iteration_rate_ratio, ratio(p->iterations_per_second, c->iterations_per_second)) ||
            !close(cmp.raw_cost_ratio, ratio(c->raw_cost, p->raw_cost)) ||
            !close(cmp.flight_time_ratio, ratio(c->flight_time, p->flight_time))) {
            return "comparison ratios differ";
        }
    } else if (stats.comparison) {
        return "comparison present with one sampler";
    }
    return {};
}

}  // namespace soarplan::testing
