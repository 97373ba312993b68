#include "antsched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "antsched/error.hpp"

namespace antsched::experiment {

void ExperimentConfig::validate() const {
    scenario.validate();
    radio.validate();
    weights.validate();
    greedy.validate();
    budget.validate();
    if (runsPerPoint < 1) throw ConfigError("runsPerPoint must be at least 1");
    if (removalCounts.empty()) throw ConfigError("removalCounts must not be empty");
    if (schedulers.empty()) throw ConfigError("at least one scheduler is required");
    for (auto r : removalCounts) {
        auto probe = scenario;
        probe.numRemoved = r;
        probe.validate();
    }
}

ExperimentConfig parseExperimentConfig(std::string_view text) {
    const auto kv = io::KeyValueConfig::parse(text);
    auto known = io::scenarioConfigKeys();
    for (auto k : io::radioParamKeys()) known.push_back(k);
    for (std::string_view k : {"removalCounts", "runsPerPoint", "schedulers", "weights", "ladder",
                               "maxBufferSegments", "maxNodes", "timeLimit", "baseSeed", "threads"})
        known.push_back(k);
    kv.requireKnownKeys(known);

    ExperimentConfig config;
    io::applyScenarioConfig(kv, config.scenario);
    io::applyRadioParams(kv, config.radio);
    if (auto list = kv.getUnsignedList("removalCounts")) config.removalCounts.assign(list->begin(), list->end());
    if (auto v = kv.getUnsigned("runsPerPoint")) config.runsPerPoint = *v;
    if (auto list = kv.getList("schedulers")) {
        config.schedulers.clear();
        for (const auto& item : *list) config.schedulers.push_back(sched::parseSchedulerKind(item));
    }
    if (auto v = kv.get("weights")) config.weights = io::parseWeightsSpec(*v);
    if (auto v = kv.get("ladder")) config.ladder = io::parseLadderSpec(*v);
    if (auto v = kv.getUnsigned("maxBufferSegments")) config.greedy.maxBufferSegments = *v;
    if (auto v = kv.getUnsigned("maxNodes")) config.budget.maxNodes = *v;
    if (auto v = kv.getDouble("timeLimit")) config.budget.timeLimitSeconds = *v;
    if (auto v = kv.getUnsigned("baseSeed")) config.baseSeed = *v;
    if (auto v = kv.getUnsigned("threads")) config.threads = static_cast<unsigned>(std::max<std::uint64_t>(*v, 1));
    config.validate();
    return config;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t cellSeed(std::uint64_t baseSeed, std::size_t removalCount, std::size_t run) noexcept {
    const auto cell = (static_cast<std::uint64_t>(removalCount) << 32) ^ static_cast<std::uint64_t>(run);
    return mix64(baseSeed ^ mix64(cell));
}

namespace {

std::vector<ResultRow> runCell(const ExperimentConfig& config, std::size_t removal, std::size_t run) {
    auto scenarioConfig = config.scenario;
    scenarioConfig.numRemoved = removal;
    scenarioConfig.rngSeed = cellSeed(config.baseSeed, removal, run);
    const auto built = channel::buildScenario(scenarioConfig, config.radio);

    std::vector<ResultRow> rows;
    for (auto kind : config.schedulers) {
        ResultRow row{removal, run, kind, sched::SolveStatus::Optimal, scenarioConfig.rngSeed, std::nullopt};
        auto result = sched::runScheduler(kind, built.scenario, config.ladder, config.weights, config.greedy,
                                          config.budget);
        row.status = result.status;
        if (result.schedule) {
            const auto validation = validateSchedule(*result.schedule, built.scenario, config.ladder);
            if (!validation.ok())
                throw std::logic_error(std::string(sched::name(kind)) + " produced an invalid schedule: " +
                                       validation.violations.front().describe());
            row.metrics = computeMetrics(*result.schedule, built.scenario, config.ladder, config.weights);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

ResultTable runExperiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (auto removal : config.removalCounts)
        for (std::size_t run = 0; run < config.runsPerPoint; ++run) cells.emplace_back(removal, run);

    std::vector<std::vector<ResultRow>> results(cells.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(cells.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) results[i] = runCell(config, cells[i].first, cells[i].second);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failureMutex;
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < cells.size(); i = next++) {
                        try {
                            results[i] = runCell(config, cells[i].first, cells[i].second);
                        } catch (...) {
                            std::lock_guard lock(failureMutex);
                            if (!failure) failure = std::current_exception();
                        }
                    }
                });
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    ResultTable table;
    for (auto& cell : results)
        for (auto& row : cell) table.rows.push_back(std::move(row));
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.removedBs, a.run, a.scheduler) < std::tie(b.removedBs, b.run, b.scheduler);
    });
    return table;
}

std::string writeResultsCsv(const ResultTable& table) {
    std::string out = "removed_bs,run,scheduler,status,seed,avg_quality_mb,avg_lateness_s,avg_buffer_segments,objective\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.removedBs) + "," + std::to_string(r.run) + "," + std::string(sched::name(r.scheduler)) +
               "," + sched::toString(r.status) + "," + std::to_string(r.seed) + ",";
        if (r.metrics) {
            out += io::formatFixed(r.metrics->avgQualityMB, 6) + "," + io::formatFixed(r.metrics->avgLatenessSeconds, 6) +
                   "," + io::formatFixed(r.metrics->avgBufferSegments, 6) + "," +
                   io::formatFixed(r.metrics->objectiveValue, 6);
        } else {
            out += ",,,";
        }
        out += "\n";
    }
    return out;
}

Interval confidenceInterval(std::span<const double> samples, double level) {
    if (samples.size() < 2) throw DomainError("a confidence interval needs at least two samples");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must be in (0, 1)");
    const auto n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double stddev = std::sqrt(ss / (n - 1.0));
    const boost::math::students_t dist(n - 1.0);
    const double t = boost::math::quantile(dist, 0.5 + level / 2.0);
    return {mean, t * stddev / std::sqrt(n)};
}

const char* toString(Metric metric) noexcept {
    switch (metric) {
        case Metric::Quality: return "quality";
        case Metric::Lateness: return "lateness";
        case Metric::Buffer: return "buffer";
    }
    return "unknown";
}

double metricValue(const MetricsReport& report, Metric metric) noexcept {
    switch (metric) {
        case Metric::Quality: return report.avgQualityMB;
        case Metric::Lateness: return report.avgLatenessSeconds;
        case Metric::Buffer: return report.avgBufferSegments;
    }
    return 0.0;
}

std::vector<PlotPoint> aggregate(const ResultTable& table, Metric metric) {
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> groups;
    for (const auto& r : table.rows)
        if (r.metrics) groups[{std::string(sched::name(r.scheduler)), r.removedBs}].push_back(metricValue(*r.metrics, metric));

    std::vector<PlotPoint> points;
    for (const auto& [key, samples] : groups) {
        PlotPoint p{key.second, key.first, 0.0, std::nullopt, samples.size()};
        if (samples.size() >= 2) {
            const auto ci = confidenceInterval(samples);
            p.mean = ci.mean;
            p.ciHalfWidth = ci.halfWidth;
        } else {
            p.mean = samples.front();
        }
        points.push_back(std::move(p));
    }
    return points;
}

PlotFiles emitPlotData(const ResultTable& table, const QualityLadder& ladder) {
    PlotFiles files;
    const std::string header = "removed_bs,scheduler,mean,ci_halfwidth\n";

    std::set<sched::SchedulerKind> present;
    std::set<sched::SchedulerKind> withData;
    std::set<std::size_t> removals;
    for (const auto& r : table.rows) {
        present.insert(r.scheduler);
        removals.insert(r.removedBs);
        if (r.metrics) withData.insert(r.scheduler);
    }
    for (auto kind : present)
        if (!withData.count(kind))
            files.notes.push_back(std::string(sched::name(kind)) + " omitted from plot data: every cell was infeasible");

    auto render = [&](Metric metric) {
        auto points = aggregate(table, metric);
        if (metric == Metric::Quality) {
            const std::size_t top = ladder.highestIndex();
            for (std::size_t level = top > 0 ? top - 1 : 0; level <= top; ++level) {
                for (auto r : removals)
                    points.push_back({r, "reference_" + ladder[level].variantLabel, ladder.sizeOf(level), 0.0, 0});
            }
        }
        std::stable_sort(points.begin(), points.end(), [](const PlotPoint& a, const PlotPoint& b) {
            return std::tie(a.series, a.removedBs) < std::tie(b.series, b.removedBs);
        });
        std::string out = header;
        for (const auto& p : points)
            out += std::to_string(p.removedBs) + "," + p.series + "," + io::formatFixed(p.mean, 6) + "," +
                   (p.ciHalfWidth ? io::formatFixed(*p.ciHalfWidth, 6) : std::string("nan")) + "\n";
        return out;
    };
    files.quality = render(Metric::Quality);
    files.lateness = render(Metric::Lateness);
    files.buffer = render(Metric::Buffer);
    return files;
}

}  // namespace antsched::experiment
