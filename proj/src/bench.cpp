#include "soarplan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "soarplan/config.hpp"
#include "soarplan/format.hpp"
#include "soarplan/svg.hpp"

namespace soarplan {

namespace {

constexpr const char* kRecordsHeader =
    "sampler,seed,status,raw_cost,offset_cost,flight_time,iterations,active_nodes,tree_nodes,witnesses";
constexpr const char* kTimingHeader = "sampler,seed,wall_seconds,loop_seconds,iterations_per_second";

const char* sampler_color(SamplerKind kind) {
    return kind == SamplerKind::Primitive ? "#1f77b4" : "#ff7f0e";
}

std::string optional_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

PlanStatus parse_status(std::string_view text) {
    if (text == "solved") return PlanStatus::Solved;
    if (text == "no_solution") return PlanStatus::NoSolution;
    throw std::invalid_argument("unknown status '" + std::string(text) + "'");
}

std::optional<double> ratio(const MetricStats& num, const MetricStats& den) {
    if (!num.mean || !den.mean || *den.mean == 0.0) return std::nullopt;
    return *num.mean / *den.mean;
}

template <typename Fn>
std::vector<double> collect(const std::vector<const RunRecord*>& runs, Fn fn) {
    std::vector<double> out;
    for (const RunRecord* r : runs) {
        if (auto v = fn(*r)) out.push_back(*v);
    }
    return out;
}

// Keyed by (sampler, seed) so timing rows can be merged back in any order.
using RunKey = std::pair<int, std::uint64_t>;

std::vector<std::string_view> csv_rows(std::istream& in, const char* schema, const char* header,
                                       std::vector<std::string>& storage, const char* what) {
    std::string line;
    int number = 0;
    bool schema_seen = false;
    bool header_seen = false;
    std::vector<std::string_view> rows;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) {
            throw std::runtime_error(std::string(what) + " line " + std::to_string(number) + ": " + msg);
        };
        if (!schema_seen) {
            if (line != std::string("# ") + schema) fail("expected '# " + std::string(schema) + "'");
            schema_seen = true;
            continue;
        }
        if (!header_seen) {
            if (line != header) fail("unexpected header");
            header_seen = true;
            continue;
        }
        storage.push_back(std::to_string(number) + ":" + line);
    }
    if (!header_seen) throw std::runtime_error(std::string(what) + ": missing header");
    for (const auto& s : storage) rows.emplace_back(s);
    return rows;
}

}  // namespace

void ExperimentSpec::validate() const {
    std::vector<std::string> issues;
    if (runs < 1) issues.push_back("runs must be >= 1 (got " + std::to_string(runs) + ")");
    if (samplers.empty()) issues.push_back("at least one sampler is required");
    if (threads < 0) issues.push_back("threads must be >= 0");
    for (auto& issue : cross_check(environment, aircraft, planner)) issues.push_back(std::move(issue));
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

std::uint64_t run_seed(std::uint64_t base_seed, int index) {
    return base_seed + static_cast<std::uint64_t>(index);
}

double RunRecord::iterations_per_second() const {
    return loop_seconds > 0.0 ? static_cast<double>(iterations) / loop_seconds : 0.0;
}

RunRecord make_record(SamplerKind sampler, std::uint64_t seed, const PlanResult& result,
                      double wall_seconds) {
    RunRecord r;
    r.sampler = sampler;
    r.seed = seed;
    r.status = result.status;
    if (result.status == PlanStatus::Solved) {
        r.raw_cost = result.solution.raw_cost;
        r.offset_cost = result.solution.offset_cost;
        r.flight_time = result.solution.flight_time;
    }
    r.iterations = result.iterations;
    r.active_nodes = result.active_nodes;
    r.tree_nodes = result.tree_nodes;
    r.witnesses = result.witnesses;
    r.wall_seconds = wall_seconds;
    r.loop_seconds = result.loop_seconds;
    return r;
}

MetricStats compute_stats(const std::vector<double>& values) {
    MetricStats s;
    s.count = values.size();
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    s.mean = mean;
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        s.std_dev = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

const SamplerSummary* SummaryStats::find(SamplerKind kind) const {
    for (const auto& s : samplers) {
        if (s.sampler == kind) return &s;
    }
    return nullptr;
}

SummaryStats summarize(const std::vector<RunRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");
    SummaryStats stats;
    std::vector<SamplerKind> order;
    for (const auto& r : records) {
        if (std::find(order.begin(), order.end(), r.sampler) == order.end()) order.push_back(r.sampler);
    }
    for (SamplerKind kind : order) {
        std::vector<const RunRecord*> all;
        std::vector<const RunRecord*> solved;
        for (const auto& r : records) {
            if (r.sampler != kind) continue;
            all.push_back(&r);
            if (r.status == PlanStatus::Solved) solved.push_back(&r);
        }
        SamplerSummary s;
        s.sampler = kind;
        s.runs = all.size();
        s.solved = solved.size();
        s.success_rate = static_cast<double>(s.solved) / static_cast<double>(s.runs);
        s.raw_cost = compute_stats(collect(solved, [](const RunRecord& r) { return r.raw_cost; }));
        s.offset_cost = compute_stats(collect(solved, [](const RunRecord& r) { return r.offset_cost; }));
        s.flight_time = compute_stats(collect(solved, [](const RunRecord& r) { return r.flight_time; }));
        auto iters = [](const RunRecord& r) { return std::optional<double>(static_cast<double>(r.iterations)); };
        s.iterations = compute_stats(collect(solved, iters));
        s.iterations_all = compute_stats(collect(all, iters));
        s.iterations_per_second = compute_stats(collect(
            all, [](const RunRecord& r) { return std::optional<double>(r.iterations_per_second()); }));
        stats.samplers.push_back(std::move(s));
    }
    const SamplerSummary* prim = stats.find(SamplerKind::Primitive);
    const SamplerSummary* cont = stats.find(SamplerKind::Continuous);
    if (prim && cont) {
        SamplerComparison c;
        c.iteration_ratio = ratio(prim->iterations_all, cont->iterations_all);
        c.iteration_rate_ratio = ratio(prim->iterations_per_second, cont->iterations_per_second);
        c.raw_cost_ratio = ratio(cont->raw_cost, prim->raw_cost);
        c.flight_time_ratio = ratio(cont->flight_time, prim->flight_time);
        stats.comparison = c;
    }
    return stats;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    struct Job {
        SamplerKind sampler;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (SamplerKind kind : spec.samplers) {
        for (int i = 0; i < spec.runs; ++i) jobs.push_back({kind, run_seed(spec.base_seed, i)});
    }

    ExperimentResult result;
    result.records.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                PlannerConfig cfg = spec.planner;
                cfg.sampler = jobs[i].sampler;
                cfg.seed = jobs[i].seed;
                const auto t0 = std::chrono::steady_clock::now();
                const PlanResult plan = sst_plan(spec.environment, spec.aircraft, cfg);
                const double wall =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                // Each slot is written by exactly one worker.
                result.records[i] = make_record(jobs[i].sampler, jobs[i].seed, plan, wall);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };

    std::size_t threads = 1;
    if (!spec.serialize) {
        threads = spec.threads > 0 ? static_cast<std::size_t>(spec.threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, jobs.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    result.summary = summarize(result.records);
    return result;
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << "# " << kRecordsSchema << "\n" << kRecordsHeader << "\n";
    for (const auto& r : records) {
        out << to_string(r.sampler) << ',' << r.seed << ',' << to_string(r.status) << ','
            << optional_field(r.raw_cost) << ',' << optional_field(r.offset_cost) << ','
            << optional_field(r.flight_time) << ',' << r.iterations << ',' << r.active_nodes << ','
            << r.tree_nodes << ',' << r.witnesses << '\n';
    }
}

void write_timing_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << "# " << kTimingSchema << "\n" << kTimingHeader << "\n";
    for (const auto& r : records) {
        out << to_string(r.sampler) << ',' << r.seed << ',' << format_double(r.wall_seconds) << ','
            << format_double(r.loop_seconds) << ',' << format_double(r.iterations_per_second()) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const SummaryStats& stats) {
    out << "# " << kSummarySchema << "\n";
    out << "sampler,runs,solved,success_rate";
    for (const char* m : {"raw_cost", "offset_cost", "flight_time", "iterations",
                          "iterations_all", "iterations_per_second"}) {
        out << ',' << m << "_mean," << m << "_std";
    }
    out << '\n';
    for (const auto& s : stats.samplers) {
        out << to_string(s.sampler) << ',' << s.runs << ',' << s.solved << ','
            << format_double(s.success_rate);
        for (const MetricStats* m : {&s.raw_cost, &s.offset_cost, &s.flight_time, &s.iterations,
                                     &s.iterations_all, &s.iterations_per_second}) {
            out << ',' << optional_field(m->mean) << ',' << optional_field(m->std_dev);
        }
        out << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const SummaryStats& stats) {
    out << "# " << kComparisonSchema << "\n";
    out << "metric,ratio_definition,primitive_mean,primitive_std,continuous_mean,continuous_std,ratio\n";
    const SamplerSummary* prim = stats.find(SamplerKind::Primitive);
    const SamplerSummary* cont = stats.find(SamplerKind::Continuous);
    if (!prim || !cont || !stats.comparison) return;
    const auto& c = *stats.comparison;
    auto row = [&](const char* name, const char* def, const MetricStats& p, const MetricStats& q,
                   const std::optional<double>& r) {
        out << name << ',' << def << ',' << optional_field(p.mean) << ',' << optional_field(p.std_dev)
            << ',' << optional_field(q.mean) << ',' << optional_field(q.std_dev) << ','
            << optional_field(r) << '\n';
    };
    row("iterations", "primitive/continuous", prim->iterations_all, cont->iterations_all,
        c.iteration_ratio);
    row("iterations_per_second", "primitive/continuous", prim->iterations_per_second,
        cont->iterations_per_second, c.iteration_rate_ratio);
    row("raw_cost", "continuous/primitive", prim->raw_cost, cont->raw_cost, c.raw_cost_ratio);
    row("flight_time", "continuous/primitive", prim->flight_time, cont->flight_time,
        c.flight_time_ratio);
}

std::vector<RunRecord> read_records_csv(std::istream& records, std::istream* timing) {
    std::vector<std::string> storage;
    const auto rows = csv_rows(records, kRecordsSchema, kRecordsHeader, storage, "records csv");
    std::vector<RunRecord> out;
    for (std::string_view row : rows) {
        const auto colon = row.find(':');
        const std::string where = "records csv line " + std::string(row.substr(0, colon));
        row.remove_prefix(colon + 1);
        const auto f = split(row, ',');
        if (f.size() != 10) throw std::runtime_error(where + ": expected 10 fields");
        auto number = [&](std::string_view t) -> std::optional<double> {
            if (t.empty()) return std::nullopt;
            const auto v = parse_double(t);
            if (!v) throw std::runtime_error(where + ": bad number '" + std::string(t) + "'");
            return v;
        };
        auto integer = [&](std::string_view t) {
            const auto v = parse_integer<std::uint64_t>(t);
            if (!v) throw std::runtime_error(where + ": bad integer '" + std::string(t) + "'");
            return *v;
        };
        RunRecord r;
        try {
            r.sampler = parse_sampler_kind(f[0]);
            r.status = parse_status(f[2]);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
        r.seed = integer(f[1]);
        r.raw_cost = number(f[3]);
        r.offset_cost = number(f[4]);
        r.flight_time = number(f[5]);
        r.iterations = static_cast<std::int64_t>(integer(f[6]));
        r.active_nodes = integer(f[7]);
        r.tree_nodes = integer(f[8]);
        r.witnesses = integer(f[9]);
        const bool has_metrics = r.raw_cost || r.offset_cost || r.flight_time;
        const bool complete = r.raw_cost && r.offset_cost && r.flight_time;
        if ((r.status == PlanStatus::Solved) != complete || (!complete && has_metrics)) {
            throw std::runtime_error(where + ": cost fields must be present exactly for solved runs");
        }
        out.push_back(r);
    }
    if (timing) {
        std::map<RunKey, std::pair<double, double>> times;
        std::vector<std::string> tstorage;
        for (std::string_view row : csv_rows(*timing, kTimingSchema, kTimingHeader, tstorage, "timing csv")) {
            const auto colon = row.find(':');
            const std::string where = "timing csv line " + std::string(row.substr(0, colon));
            row.remove_prefix(colon + 1);
            const auto f = split(row, ',');
            if (f.size() != 5) throw std::runtime_error(where + ": expected 5 fields");
            const auto seed = parse_integer<std::uint64_t>(f[1]);
            const auto wall = parse_double(f[2]);
            const auto loop = parse_double(f[3]);
            if (!seed || !wall || !loop) throw std::runtime_error(where + ": bad value");
            SamplerKind kind;
            try {
                kind = parse_sampler_kind(f[0]);
            } catch (const std::invalid_argument& e) {
                throw std::runtime_error(where + ": " + e.what());
            }
            times[{static_cast<int>(kind), *seed}] = {*wall, *loop};
        }
        for (auto& r : out) {
            auto it = times.find({static_cast<int>(r.sampler), r.seed});
            if (it == times.end()) {
                throw std::runtime_error("timing csv: no row for " + std::string(to_string(r.sampler)) +
                                         " seed " + std::to_string(r.seed));
            }
            r.wall_seconds = it->second.first;
            r.loop_seconds = it->second.second;
        }
    }
    return out;
}

std::vector<std::filesystem::path> export_report(const std::vector<RunRecord>& records,
                                                 const SummaryStats& stats,
                                                 const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto write = [&](const char* name, const std::string& content) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary);
        out << content;
        out.close();
        if (!out) throw std::runtime_error(path.string() + ": write failed");
        written.push_back(path);
    };
    auto to_text = [](auto&& fn) {
        std::ostringstream ss;
        fn(ss);
        return ss.str();
    };
    write("records.csv", to_text([&](std::ostream& o) { write_records_csv(o, records); }));
    write("timing.csv", to_text([&](std::ostream& o) { write_timing_csv(o, records); }));
    write("summary.csv", to_text([&](std::ostream& o) { write_summary_csv(o, stats); }));
    write("comparison.csv", to_text([&](std::ostream& o) { write_comparison_csv(o, stats); }));

    auto chart = [&](const char* title, const char* y_label, auto metric, auto stat) {
        svg::BarChart c;
        c.title = title;
        c.y_label = y_label;
        for (const auto& s : stats.samplers) {
            svg::Bar bar;
            bar.label = std::string(to_string(s.sampler)) + " (" + std::to_string(s.solved) + "/" +
                        std::to_string(s.runs) + " solved)";
            bar.color = sampler_color(s.sampler);
            const MetricStats& m = stat(s);
            bar.mean = m.mean;
            bar.std_dev = m.std_dev;
            for (const auto& r : records) {
                if (r.sampler != s.sampler) continue;
                if (auto v = metric(r)) bar.samples.push_back(*v);
            }
            c.bars.push_back(std::move(bar));
        }
        return svg::render(c);
    };
    write("cost.svg", chart(
                          "Solution path raw energy cost (solved runs)", "raw cost",
                          [](const RunRecord& r) { return r.raw_cost; },
                          [](const SamplerSummary& s) -> const MetricStats& { return s.raw_cost; }));
    write("flight_time.svg",
          chart(
              "Solution path flight time (solved runs)", "flight time [s]",
              [](const RunRecord& r) { return r.flight_time; },
              [](const SamplerSummary& s) -> const MetricStats& { return s.flight_time; }));
    write("iterations.svg",
          chart(
              "Iterations completed (all runs)", "iterations",
              [](const RunRecord& r) { return std::optional<double>(static_cast<double>(r.iterations)); },
              [](const SamplerSummary& s) -> const MetricStats& { return s.iterations_all; }));
    return written;
}

std::string format_summary(const SummaryStats& stats) {
    std::ostringstream out;
    auto pm = [](const MetricStats& m) {
        if (!m.mean) return std::string("n/a");
        std::ostringstream s;
        s.precision(6);
        s << *m.mean << " +/- ";
        if (m.std_dev) {
            s << *m.std_dev;
        } else {
            s << "n/a";
        }
        return s.str();
    };
    for (const auto& s : stats.samplers) {
        out << to_string(s.sampler) << ": solved " << s.solved << "/" << s.runs << "\n"
            << "  raw cost        " << pm(s.raw_cost) << "\n"
            << "  offset cost     " << pm(s.offset_cost) << "\n"
            << "  flight time [s] " << pm(s.flight_time) << "\n"
            << "  iterations      " << pm(s.iterations_all) << "\n"
            << "  iterations/s    " << pm(s.iterations_per_second) << "\n";
    }
    if (stats.comparison) {
        auto r = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("n/a"); };
        const auto& c = *stats.comparison;
        out << "iterations ratio (primitive/continuous):   " << r(c.iteration_ratio) << "\n"
            << "iterations/s ratio (primitive/continuous): " << r(c.iteration_rate_ratio) << "\n"
            << "raw cost ratio (continuous/primitive):     " << r(c.raw_cost_ratio) << "\n"
            << "flight time ratio (continuous/primitive):  " << r(c.flight_time_ratio) << "\n";
    }
    return out.str();
}

}  // namespace soarplan
