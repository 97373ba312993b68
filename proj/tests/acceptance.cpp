// Acceptance suite: one PASS/FAIL line per headline requirement. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "antsched/channel.hpp"
#include "antsched/experiment.hpp"
#include "antsched/hls.hpp"
#include "antsched/io.hpp"
#include "antsched/schedulers.hpp"
#include "brute_force.hpp"

using namespace antsched;
using sched::SchedulerKind;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double secondsSince(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int decimals = 3) { return io::formatFixed(v, decimals); }

std::string load(const std::string& name) {
    std::ifstream in(std::string(ANTSCHED_TEST_DATA) + "/" + name, std::ios::binary);
    if (!in) throw std::runtime_error("missing test data " + name);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// ---------------------------------------------------------------------------------------

Outcome oracleEquivalence() {
    const auto report = oracle::runOracleCheck(5, 500, 20240611, {440, 10, 1});
    return {report.mismatches == 0 && report.instances >= 500 && report.seconds < 60.0,
            std::to_string(report.instances) + " instances (" + std::to_string(report.feasible) +
                " feasible), " + std::to_string(report.mismatches) + " mismatches, " + fmt(report.seconds) + " s"};
}

Outcome optimizerDominance() {
    std::mt19937_64 rng(8);
    std::size_t feasible = 0, violations = 0, drawn = 0;
    while (feasible < 250 && drawn < 5000) {
        ++drawn;
        const auto inst = oracle::randomInstance(rng, 8, 8, 3, 1 + drawn % 2);
        const auto ex = sched::exactOptimize(inst.scenario, inst.ladder, {});
        if (ex.status != sched::SolveStatus::Optimal) continue;
        ++feasible;
        const double best = objectiveValue(*ex.schedule, inst.ladder, {});
        for (auto h : {sched::bufferFirst(inst.scenario, inst.ladder), sched::qualityFirst(inst.scenario, inst.ladder),
                       sched::fill(inst.scenario, inst.ladder)})
            if (best > objectiveValue(h, inst.ladder, {}) + 1e-9) ++violations;
    }
    return {feasible >= 200 && violations == 0,
            std::to_string(feasible) + " feasible instances, " + std::to_string(violations) + " violations"};
}

// The full removal sweep is shared by the scenario-level criteria.
struct Sweep {
    experiment::ResultTable table;
    double seconds = 0.0;

    [[nodiscard]] bool cellFeasible(std::size_t removal, std::size_t run) const {
        for (const auto& r : table.rows)
            if (r.removedBs == removal && r.run == run && r.scheduler == SchedulerKind::Exact)
                return r.status != sched::SolveStatus::Infeasible;
        return true;
    }

    // mean of a metric over rows of one scheduler selected by a removal predicate
    [[nodiscard]] double mean(SchedulerKind kind, experiment::Metric metric,
                              const std::function<bool(std::size_t)>& removalFilter) const {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : table.rows)
            if (r.scheduler == kind && r.metrics && removalFilter(r.removedBs) && cellFeasible(r.removedBs, r.run)) {
                sum += experiment::metricValue(*r.metrics, metric);
                ++n;
            }
        return n ? sum / static_cast<double>(n) : std::nan("");
    }
};

Sweep runSweep() {
    experiment::ExperimentConfig config;  // removals 0..20 step 2, 30 runs, all schedulers
    config.budget.timeLimitSeconds = 20.0;
    config.threads = std::max(1u, std::thread::hardware_concurrency());
    const auto start = Clock::now();
    Sweep sweep{experiment::runExperiment(config), 0.0};
    sweep.seconds = secondsSince(start);
    return sweep;
}

Outcome zeroLateness(const Sweep& sweep) {
    std::size_t checked = 0, late = 0, infeasible = 0, budget = 0;
    for (const auto& r : sweep.table.rows) {
        if (r.scheduler != SchedulerKind::Fill && r.scheduler != SchedulerKind::Exact) continue;
        if (!sweep.cellFeasible(r.removedBs, r.run)) {
            infeasible += r.scheduler == SchedulerKind::Exact;
            continue;
        }
        budget += r.status == sched::SolveStatus::BudgetExceeded;
        ++checked;
        if (r.metrics->avgLatenessSeconds != 0.0) ++late;
    }
    return {late == 0 && sweep.seconds < 600.0,
            std::to_string(checked) + " fill/exact rows, " + std::to_string(late) + " with lateness, " +
                std::to_string(infeasible) + " infeasible cells excluded, " + std::to_string(budget) +
                " budget-capped, sweep " + fmt(sweep.seconds) + " s"};
}

std::vector<std::size_t> removals(const Sweep& sweep) {
    std::vector<std::size_t> out;
    for (const auto& r : sweep.table.rows)
        if (out.empty() || out.back() != r.removedBs) out.push_back(r.removedBs);
    return out;
}

Outcome qualityOrdering(const Sweep& sweep) {
    using experiment::Metric;
    std::size_t holds = 0, total = 0;
    double worstGap = 0.0;
    for (auto rm : removals(sweep)) {
        auto only = [rm](std::size_t r) { return r == rm; };
        const double ex = sweep.mean(SchedulerKind::Exact, Metric::Quality, only);
        const double qf = sweep.mean(SchedulerKind::QualityFirst, Metric::Quality, only);
        const double bf = sweep.mean(SchedulerKind::BufferFirst, Metric::Quality, only);
        const double fl = sweep.mean(SchedulerKind::Fill, Metric::Quality, only);
        ++total;
        if (ex >= qf - 1e-12 && qf >= bf - 1e-12) ++holds;
        if (rm <= 4) {
            worstGap = std::max(worstGap, (ex - fl) / ex);
        }
    }
    const bool pass = total > 0 && holds * 10 >= total * 9 && worstGap <= 0.05;
    return {pass, "exact >= qualityFirst >= bufferFirst at " + std::to_string(holds) + "/" + std::to_string(total) +
                      " removal counts; largest fill gap at <= 4 removed " + fmt(100 * worstGap, 2) + "%"};
}

Outcome latenessOrdering(const Sweep& sweep) {
    using experiment::Metric;
    auto heavy = [](std::size_t r) { return r > 10; };
    const double qf = sweep.mean(SchedulerKind::QualityFirst, Metric::Lateness, heavy);
    const double bf = sweep.mean(SchedulerKind::BufferFirst, Metric::Lateness, heavy);
    return {qf >= bf && bf > 0.0, "removals > 10: qualityFirst " + fmt(qf) + " s, bufferFirst " + fmt(bf) + " s"};
}

Outcome bufferBehavior(const Sweep& sweep) {
    using experiment::Metric;
    auto none = [](std::size_t r) { return r == 0; };
    auto heavy = [](std::size_t r) { return r > 10; };
    const double bf = sweep.mean(SchedulerKind::BufferFirst, Metric::Buffer, none);
    const double qf = sweep.mean(SchedulerKind::QualityFirst, Metric::Buffer, none);
    const double fl = sweep.mean(SchedulerKind::Fill, Metric::Buffer, none);
    const double ex = sweep.mean(SchedulerKind::Exact, Metric::Buffer, none);
    const double exHeavy = sweep.mean(SchedulerKind::Exact, Metric::Buffer, heavy);
    const double flHeavy = sweep.mean(SchedulerKind::Fill, Metric::Buffer, heavy);
    const bool pass = std::abs(bf - 3.0) <= 0.5 && std::abs(qf - 3.0) <= 0.5 && fl <= 1.0 && ex <= 1.0 &&
                      exHeavy >= flHeavy;
    return {pass, "removal 0: bufferFirst " + fmt(bf) + ", qualityFirst " + fmt(qf) + ", fill " + fmt(fl) +
                      ", exact " + fmt(ex) + "; removals > 10: exact " + fmt(exHeavy) + " vs fill " + fmt(flHeavy)};
}

Outcome linkBudget() {
    const channel::RadioParams radio;
    const double pl = channel::pathLossDb(1.0, 0.0);
    const double rate = channel::shannonRateMbps(radio, 134.721);
    const double capped = channel::shannonRateMbps(radio, 90.5);
    const bool pass = pl == 128.1 && std::abs(rate - 1.46) <= 0.03 && capped == 30.0 &&
                      std::abs(channel::pathLossDb(1.5, 0.0) - 134.721) < 1e-3 &&
                      channel::shannonRateMbps(radio, channel::kNoCoverage) == 0.0;
    return {pass, "PL(1 km)=" + fmt(pl, 6) + " dB, rate(134.721 dB)=" + fmt(rate, 4) + " Mbit/s, rate(90.5 dB)=" +
                      fmt(capped, 4) + " Mbit/s"};
}

Outcome hlsGolden() {
    const auto singleVariant = load("single_variant.m3u8");
    const auto masterText = load("master.m3u8");
    const auto joinedText = load("joined.m3u8");
    const auto spacedJoined = load("joined_spaced.m3u8");

    std::vector<std::string> failures;
    if (hls::emitMediaPlaylist(hls::parseMediaPlaylist(singleVariant)) != singleVariant) failures.push_back("single variant round trip");
    if (hls::emitMasterPlaylist(hls::parseMasterPlaylist(masterText)) != masterText) failures.push_back("master round trip");
    if (hls::emitMediaPlaylist(hls::parseMediaPlaylist(joinedText)) != joinedText) failures.push_back("joined round trip");
    if (hls::emitMediaPlaylist(hls::parseMediaPlaylist(spacedJoined)) != joinedText)
        failures.push_back("spaced BUFFERSIZE canonicalization");

    const std::map<std::string, hls::MediaPlaylist> variants{
        {"http://hostname/low/hls.m3u8", hls::parseMediaPlaylist(load("variant_low.m3u8"))},
        {"http://hostname/med/hls.m3u8", hls::parseMediaPlaylist(load("variant_med.m3u8"))},
        {"http://hostname/high/hls.m3u8", hls::parseMediaPlaylist(load("variant_high.m3u8"))}};
    const auto schedule = io::readScheduleCsv(load("sample_schedule.csv"), 8);
    const auto joined =
        hls::emitMediaPlaylist(hls::joinPlaylists(hls::parseMasterPlaylist(masterText), variants, schedule, 0, 0, 10));
    if (joined != joinedText) failures.push_back("joined playlist differs");
    if (joined.find("#EXT-X-BUFFERSIZE:2\n") == std::string::npos) failures.push_back("BUFFERSIZE not 2");

    std::string detail = failures.empty() ? "3 round trips, printed-form normalization and join are byte-identical"
                                          : "failed:";
    for (const auto& f : failures) detail += " " + f + ";";
    return {failures.empty(), detail};
}

Outcome fillHandTrace() {
    const Scenario sc(6, 10.0, {{3, 9, 3, 0, 0, 3}});
    const auto ladder = QualityLadder::fromSizes(std::vector<double>{1, 2, 3});
    const auto fl = sched::fill(sc, ladder);

    const std::vector<std::pair<std::size_t, std::size_t>> expected{{0, 2}, {1, 2}, {2, 0}, {2, 0}, {2, 0}, {5, 2}};
    bool traceOk = true;
    for (std::size_t s = 0; s < 6; ++s) {
        const auto& a = fl.users[0].segments[s];
        traceOk = traceOk && a.slot == expected[s].first && a.quality == expected[s].second;
    }
    const auto ex = sched::exactOptimize(sc, ladder, {});
    bool exactBetter = false;
    std::size_t inSlot1 = 0;
    double fillQ = 0.0, exactQ = 0.0;
    if (ex.status == sched::SolveStatus::Optimal) {
        fillQ = objectiveTerms(fl, ladder).qualityMB / 6.0;
        exactQ = objectiveTerms(*ex.schedule, ladder).qualityMB / 6.0;
        for (const auto& a : ex.schedule->users[0].segments) inSlot1 += a.slot == 1u;
        exactBetter = exactQ > fillQ && inSlot1 > 1 && totalLateness(*ex.schedule, 0) == 0;
    }
    return {traceOk && totalLateness(fl, 0) == 0 && exactBetter,
            std::string("fill trace ") + (traceOk ? "matches" : "differs") + ", fill avg quality " + fmt(fillQ) +
                " vs exact " + fmt(exactQ) + " with " + std::to_string(inSlot1) + " segments in slot 1"};
}

Outcome validationSafety() {
    std::mt19937_64 rng(4242);
    std::size_t schedules = 0, violations = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto inst = oracle::randomInstance(rng, 8, 8, 3, 1 + i % 4);
        for (auto kind : sched::kAllSchedulers) {
            const auto run = sched::runScheduler(kind, inst.scenario, inst.ladder, {});
            if (!run.schedule) continue;  // exact on an infeasible instance
            ++schedules;
            violations += validateSchedule(*run.schedule, inst.scenario, inst.ladder).violations.size();
        }
    }
    return {violations == 0, std::to_string(schedules) + " schedules from 1000 instances x 4 schedulers, " +
                                 std::to_string(violations) + " violations"};
}

}  // namespace

int main() {
    int failed = 0;
    auto report = [&](const char* name, const std::function<Outcome()>& check) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    };

    report("oracle equivalence", oracleEquivalence);
    report("optimizer dominance", optimizerDominance);

    Sweep sweep;
    try {
        sweep = runSweep();
    } catch (const std::exception& e) {
        std::printf("sweep failed: %s\n", e.what());
    }
    report("zero-lateness reproduction", [&] { return zeroLateness(sweep); });
    report("quality ordering", [&] { return qualityOrdering(sweep); });
    report("lateness ordering", [&] { return latenessOrdering(sweep); });
    report("buffer behavior", [&] { return bufferBehavior(sweep); });

    report("link-budget spot checks", linkBudget);
    report("HLS golden files", hlsGolden);
    report("fill hand trace", fillHandTrace);
    report("validation safety", validationSafety);

    std::printf("%d of 10 criteria failed\n", failed);
    return failed;
}
