#include "doctest_ext.hpp"

#include <map>
#include <numeric>

#include "antsched/error.hpp"
#include "antsched/experiment.hpp"
#include "brute_force.hpp"

using namespace antsched;
using namespace antsched::experiment;

namespace {

ExperimentConfig smallConfig() {
    ExperimentConfig c;
    c.removalCounts = {0, 12};
    c.runsPerPoint = 3;
    c.scenario.numBaseStations = 20;
    c.scenario.segmentCount = 20;
    return c;
}

std::size_t lineCount(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("confidence intervals") {
    const auto flat = confidenceInterval(std::vector<double>{5, 5, 5, 5});
    CHECK(flat.mean == 5);
    CHECK(flat.halfWidth == 0);
    const auto two = confidenceInterval(std::vector<double>{0, 2});
    CHECK(two.mean == 1);
    CHECK(two.halfWidth == doctest::Approx(12.706).epsilon(1e-4));
    CHECK_THROWS_AS((void)confidenceInterval(std::vector<double>{1}), DomainError);
    CHECK_THROWS_AS((void)confidenceInterval(std::vector<double>{1, 2}, 1.5), DomainError);
}

TEST_CASE("cell seeds are stable and distinct") {
    CHECK(cellSeed(1, 0, 0) == cellSeed(1, 0, 0));
    CHECK(cellSeed(1, 0, 1) != cellSeed(1, 1, 0));
    CHECK(cellSeed(1, 2, 3) != cellSeed(2, 2, 3));
    CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("single fill cell at full coverage has no lateness") {
    ExperimentConfig c;
    c.removalCounts = {0};
    c.runsPerPoint = 1;
    c.schedulers = {sched::SchedulerKind::Fill};
    const auto table = runExperiment(c);
    REQUIRE(table.rows.size() == 1);
    REQUIRE(table.rows[0].metrics);
    CHECK(table.rows[0].metrics->avgLatenessSeconds == 0);

    // independent check on the regenerated instance
    auto sc = c.scenario;
    sc.rngSeed = table.rows[0].seed;
    const auto built = channel::buildScenario(sc, c.radio);
    for (std::size_t u = 0; u < built.scenario.numUsers(); ++u)
        for (std::size_t t = 0; t < built.scenario.numSlots(); ++t)
            CHECK(built.scenario.capacity(u, t) >= c.ladder.lowestSize());
}

TEST_CASE("quality greedy beats count greedy on every row") {
    auto c = smallConfig();
    c.schedulers = {sched::SchedulerKind::BufferFirst, sched::SchedulerKind::QualityFirst};
    const auto table = runExperiment(c);
    std::map<std::pair<std::size_t, std::size_t>, std::map<sched::SchedulerKind, double>> q;
    for (const auto& r : table.rows) q[{r.removedBs, r.run}][r.scheduler] = r.metrics->avgQualityMB;
    for (auto& [cell, byKind] : q)
        CHECK(byKind[sched::SchedulerKind::QualityFirst] >= byKind[sched::SchedulerKind::BufferFirst] - 1e-12);
}

TEST_CASE("runs are reproducible and thread-count independent") {
    auto c = smallConfig();
    const auto a = writeResultsCsv(runExperiment(c));
    const auto b = writeResultsCsv(runExperiment(c));
    CHECK(a == b);
    c.threads = 4;
    CHECK(writeResultsCsv(runExperiment(c)) == a);
    CHECK(lineCount(a) == 1 + 2 * 3 * 4);
}

TEST_CASE("adding removal counts keeps existing cells") {
    auto c = smallConfig();
    const auto base = runExperiment(c);
    c.removalCounts = {0, 6, 12};
    const auto wider = runExperiment(c);
    for (const auto& r : base.rows) {
        const auto it = std::find_if(wider.rows.begin(), wider.rows.end(), [&](const ResultRow& w) {
            return w.removedBs == r.removedBs && w.run == r.run && w.scheduler == r.scheduler;
        });
        REQUIRE(it != wider.rows.end());
        CHECK(it->seed == r.seed);
        CHECK(it->metrics->objectiveValue == r.metrics->objectiveValue);
    }
}

TEST_CASE("plot data") {
    auto c = smallConfig();
    c.schedulers = {sched::SchedulerKind::Fill, sched::SchedulerKind::BufferFirst};
    const auto table = runExperiment(c);
    const auto plots = emitPlotData(table, c.ladder);
    CHECK(lineCount(plots.lateness) == 1 + 4);
    CHECK(lineCount(plots.buffer) == 1 + 4);
    CHECK(lineCount(plots.quality) == 1 + 4 + 2 * 2);
    CHECK(plots.quality.rfind("removed_bs,scheduler,mean,ci_halfwidth\n", 0) == 0);
    CHECK(plots.quality.find("0,reference_high,4.510000,0.000000\n") != std::string::npos);
    CHECK(plots.quality.find("12,reference_med,3.690000,0.000000\n") != std::string::npos);
    CHECK(plots.notes.empty());

    // means recomputed from the raw rows
    for (auto metric : {Metric::Quality, Metric::Lateness, Metric::Buffer}) {
        for (const auto& p : aggregate(table, metric)) {
            std::vector<double> samples;
            for (const auto& r : table.rows)
                if (r.removedBs == p.removedBs && sched::name(r.scheduler) == p.series)
                    samples.push_back(metricValue(*r.metrics, metric));
            CHECK(p.samples == samples.size());
            CHECK(p.mean == doctest::Approx(std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size()));
        }
    }

    c.runsPerPoint = 1;
    const auto single = emitPlotData(runExperiment(c), c.ladder);
    CHECK(single.lateness.find(",nan\n") != std::string::npos);
}

TEST_CASE("infeasible exact cells are recorded, not fatal") {
    ResultTable t;
    t.rows.push_back({0, 0, sched::SchedulerKind::Exact, sched::SolveStatus::Infeasible, 1, std::nullopt});
    t.rows.push_back({0, 0, sched::SchedulerKind::Fill, sched::SolveStatus::Optimal, 1, MetricsReport{}});
    const auto csv = writeResultsCsv(t);
    CHECK(csv.find("0,0,exact,infeasible,1,,,,\n") != std::string::npos);
    const auto plots = emitPlotData(t, QualityLadder::defaultLadder());
    REQUIRE(plots.notes.size() == 1);
    CHECK(plots.notes[0].find("exact") != std::string::npos);
    CHECK(plots.lateness.find("exact") == std::string::npos);
}

TEST_CASE("experiment configuration") {
    const auto c = parseExperimentConfig(
        "removalCounts=0,4\nrunsPerPoint=2\nschedulers=fill,exact\nweights=440,10,1\n"
        "ladder=1.77:1000000,3.69:1500000,4.51:3000000\nshadowingSigmaDb=3\nbaseSeed=9\nthreads=2\n");
    CHECK(c.removalCounts == std::vector<std::size_t>{0, 4});
    CHECK(c.runsPerPoint == 2);
    CHECK(c.schedulers.size() == 2);
    CHECK(c.scenario.shadowingSigmaDb == 3);
    CHECK(c.baseSeed == 9);
    CHECK_THROWS_AS((void)parseExperimentConfig("bogus=1\n"), ParseError);
    CHECK_THROWS_AS((void)parseExperimentConfig("runsPerPoint=0\n"), ConfigError);
    CHECK_THROWS_AS((void)parseExperimentConfig("removalCounts=41\n"), ConfigError);
    CHECK_THROWS_AS((void)parseExperimentConfig("schedulers=magic\n"), ConfigError);
}
