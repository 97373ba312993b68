#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "antsched/channel.hpp"
#include "antsched/core.hpp"
#include "antsched/io.hpp"
#include "antsched/schedulers.hpp"

namespace antsched::experiment {

struct ExperimentConfig {
    channel::ScenarioConfig scenario;  ///< numRemoved and rngSeed are set per cell
    channel::RadioParams radio;
    std::vector<std::size_t> removalCounts{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    std::size_t runsPerPoint = 30;
    std::vector<sched::SchedulerKind> schedulers{std::begin(sched::kAllSchedulers), std::end(sched::kAllSchedulers)};
    ObjectiveWeights weights;
    QualityLadder ladder = QualityLadder::defaultLadder();
    sched::GreedyConfig greedy;
    sched::SolverBudget budget;
    std::uint64_t baseSeed = 1;
    unsigned threads = 1;

    void validate() const;
};

/// Keys: every ScenarioConfig / RadioParams field plus removalCounts, runsPerPoint,
/// schedulers, weights, ladder, maxBufferSegments, maxNodes, timeLimit, baseSeed, threads.
[[nodiscard]] ExperimentConfig parseExperimentConfig(std::string_view text);

/// splitmix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of one (removalCount, run) cell; independent of which other cells exist.
[[nodiscard]] std::uint64_t cellSeed(std::uint64_t baseSeed, std::size_t removalCount, std::size_t run) noexcept;

struct ResultRow {
    std::size_t removedBs = 0;
    std::size_t run = 0;
    sched::SchedulerKind scheduler = sched::SchedulerKind::Fill;
    sched::SolveStatus status = sched::SolveStatus::Optimal;
    std::uint64_t seed = 0;
    std::optional<MetricsReport> metrics;  ///< empty for infeasible cells
};

struct ResultTable {
    std::vector<ResultRow> rows;  ///< sorted by (removedBs, run, scheduler)
};

[[nodiscard]] ResultTable runExperiment(const ExperimentConfig& config);

/// One row per cell: removed_bs,run,scheduler,status,seed,avg_quality_mb,avg_lateness_s,avg_buffer_segments,objective
[[nodiscard]] std::string writeResultsCsv(const ResultTable& table);

struct Interval {
    double mean = 0.0;
    double halfWidth = 0.0;
};

/// Student-t interval. Throws DomainError for fewer than two samples.
[[nodiscard]] Interval confidenceInterval(std::span<const double> samples, double level = 0.95);

enum class Metric { Quality, Lateness, Buffer };

[[nodiscard]] const char* toString(Metric metric) noexcept;
[[nodiscard]] double metricValue(const MetricsReport& report, Metric metric) noexcept;

struct PlotPoint {
    std::size_t removedBs = 0;
    std::string series;  ///< scheduler name or reference_<label>
    double mean = 0.0;
    std::optional<double> ciHalfWidth;  ///< empty with fewer than two samples
    std::size_t samples = 0;
};

/// Aggregated points of one metric, sorted by (series, removedBs). Infeasible cells are skipped.
[[nodiscard]] std::vector<PlotPoint> aggregate(const ResultTable& table, Metric metric);

struct PlotFiles {
    std::string quality;
    std::string lateness;
    std::string buffer;
    std::vector<std::string> notes;  ///< e.g. schedulers omitted because every cell was infeasible
};

/// Three CSVs `removed_bs,scheduler,mean,ci_halfwidth`; the quality file also carries
/// reference rows for the two highest ladder levels.
[[nodiscard]] PlotFiles emitPlotData(const ResultTable& table, const QualityLadder& ladder);

}  // namespace antsched::experiment
