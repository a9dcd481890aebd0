// Monte Carlo comparison of samplers: repeated seeded runs, summary
// statistics, CSV/SVG report.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "soarplan/energy.hpp"
#include "soarplan/planner.hpp"

namespace soarplan {

inline constexpr const char* kRecordsSchema = "soarplan-records v1";
inline constexpr const char* kTimingSchema = "soarplan-timing v1";
inline constexpr const char* kSummarySchema = "soarplan-summary v1";
inline constexpr const char* kComparisonSchema = "soarplan-comparison v1";

struct ExperimentSpec {
    Environment environment;
    AircraftParams aircraft;
    /// Template for every run; its sampler and seed fields are overridden.
    PlannerConfig planner;
    std::vector<SamplerKind> samplers{SamplerKind::Primitive, SamplerKind::Continuous};
    int runs = 30;
    std::uint64_t base_seed = 1;
    /// Run one planner at a time, for timing fidelity under wall-clock budgets.
    bool serialize = false;
    /// Worker threads when not serialized; 0 picks the hardware concurrency.
    int threads = 0;

    /// Throws ConfigError listing every problem.
    void validate() const;
};

/// Seed of run `index`; independent of how many runs the spec holds.
std::uint64_t run_seed(std::uint64_t base_seed, int index);

struct RunRecord {
    SamplerKind sampler = SamplerKind::Primitive;
    std::uint64_t seed = 0;
    PlanStatus status = PlanStatus::NoSolution;
    std::optional<double> raw_cost;     // absent unless solved
    std::optional<double> offset_cost;  // absent unless solved
    std::optional<double> flight_time;  // absent unless solved
    std::int64_t iterations = 0;
    std::size_t active_nodes = 0;
    std::size_t tree_nodes = 0;
    std::size_t witnesses = 0;
    // Timing; kept out of records.csv so that file is reproducible.
    double wall_seconds = 0.0;
    double loop_seconds = 0.0;

    double iterations_per_second() const;
    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

RunRecord make_record(SamplerKind sampler, std::uint64_t seed, const PlanResult& result,
                      double wall_seconds);

struct MetricStats {
    std::size_t count = 0;
    std::optional<double> mean;     // absent when count == 0
    std::optional<double> std_dev;  // sample std (n - 1), absent when count < 2

    friend bool operator==(const MetricStats&, const MetricStats&) = default;
};

MetricStats compute_stats(const std::vector<double>& values);

struct SamplerSummary {
    SamplerKind sampler = SamplerKind::Primitive;
    std::size_t runs = 0;
    std::size_t solved = 0;
    double success_rate = 0.0;
    // Solved runs only.
    MetricStats raw_cost;
    MetricStats offset_cost;
    MetricStats flight_time;
    MetricStats iterations;
    // All runs; these describe search throughput rather than solutions.
    MetricStats iterations_all;
    MetricStats iterations_per_second;
};

/// Primitive over continuous for throughput, continuous over primitive for
/// cost and flight time. Absent when a side has no data or a zero mean.
struct SamplerComparison {
    std::optional<double> iteration_ratio;
    std::optional<double> iteration_rate_ratio;
    std::optional<double> raw_cost_ratio;
    std::optional<double> flight_time_ratio;
};

struct SummaryStats {
    std::vector<SamplerSummary> samplers;
    /// Present when both sampler kinds took part.
    std::optional<SamplerComparison> comparison;

    const SamplerSummary* find(SamplerKind kind) const;
};

/// Throws std::invalid_argument on empty input.
SummaryStats summarize(const std::vector<RunRecord>& records);

struct ExperimentResult {
    std::vector<RunRecord> records;  // sampler-major, then run index
    SummaryStats summary;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_timing_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& out, const SummaryStats& stats);
void write_comparison_csv(std::ostream& out, const SummaryStats& stats);

/// Parses records.csv; when a timing table is given its columns are merged
/// back in. Throws std::runtime_error naming the bad line.
std::vector<RunRecord> read_records_csv(std::istream& records, std::istream* timing = nullptr);

/// Writes records.csv, timing.csv, summary.csv, comparison.csv and the
/// cost, flight-time and iteration charts into `dir` (created if missing).
/// Returns the written paths.
std::vector<std::filesystem::path> export_report(const std::vector<RunRecord>& records,
                                                 const SummaryStats& stats,
                                                 const std::filesystem::path& dir);

/// Human-readable table of the summary and comparison ratios.
std::string format_summary(const SummaryStats& stats);

}  // namespace soarplan
