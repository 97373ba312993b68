// antsched: command-line front end for the scheduling library.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 parse error,
// 3 infeasible instance, 4 solver budget exceeded (incumbent still printed),
// 5 inconsistent inputs or out-of-range slot, 6 oracle mismatch.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "antsched/error.hpp"
#include "antsched/experiment.hpp"
#include "antsched/hls.hpp"
#include "antsched/io.hpp"
#include "antsched/schedulers.hpp"
#include "brute_force.hpp"

namespace {

namespace fs = std::filesystem;
using namespace antsched;

enum Exit : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kInfeasible = 3,
    kBudget = 4,
    kConsistency = 5,
    kMismatch = 6,
};

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void writeFile(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

struct SimulateArgs {
    std::string config;
    std::string outDir = ".";
    std::optional<unsigned> threads;
};

int runSimulate(const SimulateArgs& args) {
    auto config = args.config.empty() ? experiment::ExperimentConfig{}
                                      : experiment::parseExperimentConfig(readFile(args.config));
    if (args.threads) config.threads = std::max(1u, *args.threads);

    const auto table = experiment::runExperiment(config);
    const auto plots = experiment::emitPlotData(table, config.ladder);
    for (const auto& note : plots.notes) std::cerr << "note: " << note << "\n";

    const fs::path dir(args.outDir);
    fs::create_directories(dir);
    writeFile(dir / "results.csv", experiment::writeResultsCsv(table));
    writeFile(dir / "quality.csv", plots.quality);
    writeFile(dir / "lateness.csv", plots.lateness);
    writeFile(dir / "buffer.csv", plots.buffer);
    std::cerr << table.rows.size() << " rows written to " << dir.string() << "\n";
    return kOk;
}

struct ScheduleArgs {
    std::string scenario;
    std::string ladder;
    std::string scheduler = "exact";
    std::string weights;
    std::optional<std::size_t> segments;
    double slotSeconds = 10.0;
    std::size_t maxBuffer = 3;
    std::optional<std::size_t> maxNodes;
    std::optional<double> timeLimit;
};

int runSchedule(const ScheduleArgs& args) {
    const auto kind = sched::parseSchedulerKind(args.scheduler);
    const auto ladder = args.ladder.empty() ? QualityLadder::defaultLadder() : io::parseLadderSpec(args.ladder);
    const auto weights = args.weights.empty() ? ObjectiveWeights{} : io::parseWeightsSpec(args.weights);
    weights.validate();
    const auto scenario = io::readScenarioCsv(readFile(args.scenario), args.segments, args.slotSeconds);

    sched::GreedyConfig greedy{args.maxBuffer};
    sched::SolverBudget budget{args.maxNodes, args.timeLimit};
    const auto run = sched::runScheduler(kind, scenario, ladder, weights, greedy, budget);

    switch (run.status) {
        case sched::SolveStatus::Infeasible:
            std::cerr << "error: instance is infeasible for " << args.scheduler << "\n";
            return kInfeasible;
        case sched::SolveStatus::BudgetExceeded:
            std::cout << io::writeScheduleCsv(*run.schedule, ladder);
            std::cerr << "warning: solver budget exceeded after " << run.nodes
                      << " nodes; printed the best schedule found\n";
            return kBudget;
        case sched::SolveStatus::Optimal:
            break;
    }
    std::cout << io::writeScheduleCsv(*run.schedule, ladder);
    return kOk;
}

struct RewriteArgs {
    std::string master;
    std::vector<std::string> variants;
    std::string schedule;
    std::size_t user = 0;
    std::size_t slot = 1;
    int refresh = 10;
    std::optional<std::size_t> slots;
};

int runRewrite(const RewriteArgs& args) {
    const auto master = hls::parseMasterPlaylist(readFile(args.master));
    if (args.variants.size() != master.variants.size())
        throw ConsistencyError("master lists " + std::to_string(master.variants.size()) + " variants but " +
                               std::to_string(args.variants.size()) + " variant files were given");
    std::map<std::string, hls::MediaPlaylist> playlists;
    for (std::size_t i = 0; i < args.variants.size(); ++i)
        playlists.emplace(master.variants[i].uri, hls::parseMediaPlaylist(readFile(args.variants[i])));

    const auto scheduleText = readFile(args.schedule);
    std::size_t numSlots = 0;
    if (args.slots) {
        numSlots = *args.slots;
    } else {
        // horizon defaults to the longest of the segment count and the latest slot used
        const auto probe = io::readScheduleCsv(scheduleText, std::numeric_limits<std::size_t>::max());
        for (const auto& u : probe.users) {
            numSlots = std::max(numSlots, u.segments.size());
            for (const auto& a : u.segments)
                if (a.slot) numSlots = std::max(numSlots, *a.slot + 1);
        }
    }
    const auto schedule = io::readScheduleCsv(scheduleText, numSlots);
    if (args.slot == 0 || args.slot > numSlots)
        throw DomainError("--slot " + std::to_string(args.slot) + " outside the schedule horizon 1.." +
                          std::to_string(numSlots));

    std::cout << hls::emitMediaPlaylist(
        hls::joinPlaylists(master, playlists, schedule, args.user, args.slot - 1, args.refresh));
    return kOk;
}

struct OracleArgs {
    std::size_t maxSlots = 5;
    std::size_t instances = 500;
    std::uint64_t seed = 1;
};

int runOracle(const OracleArgs& args) {
    if (args.maxSlots == 0 || args.maxSlots > 8) throw ConfigError("--max-slots must be in 1..8");
    const auto report = oracle::runOracleCheck(args.maxSlots, args.instances, args.seed);
    std::cout << "instances=" << report.instances << " feasible=" << report.feasible
              << " mismatches=" << report.mismatches << " seconds=" << io::formatFixed(report.seconds, 3) << "\n";
    return report.mismatches == 0 ? kOk : kMismatch;
}

template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const ConsistencyError& e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return kConsistency;
    } catch (const DomainError& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return kConsistency;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anticipatory video segment scheduling toolkit"};
    app.require_subcommand(1);

    SimulateArgs simulate;
    auto* sim = app.add_subcommand("simulate", "Run the removal sweep and write result and plot CSVs");
    sim->add_option("--config", simulate.config, "key=value experiment config (defaults when omitted)")
        ->check(CLI::ExistingFile);
    sim->add_option("--out-dir", simulate.outDir, "Output directory");
    sim->add_option("--threads", simulate.threads, "Worker threads (overrides the config)");

    ScheduleArgs schedule;
    auto* sch = app.add_subcommand("schedule", "Schedule one scenario CSV and print the schedule CSV");
    sch->add_option("--scenario", schedule.scenario, "Scenario CSV (user,slot,capacity_mb)")
        ->required()
        ->check(CLI::ExistingFile);
    sch->add_option("--ladder", schedule.ladder, "Sizes in MB, optionally size:bandwidth, comma-separated");
    sch->add_option("--scheduler", schedule.scheduler, "bufferFirst | qualityFirst | fill | exact");
    sch->add_option("--weights", schedule.weights, "lateness,quality,buffer weights");
    sch->add_option("--segments", schedule.segments, "Segments per user (default: number of slots)");
    sch->add_option("--slot-seconds", schedule.slotSeconds, "Slot length in seconds");
    sch->add_option("--max-buffer", schedule.maxBuffer, "Greedy buffer limit in segments");
    sch->add_option("--max-nodes", schedule.maxNodes, "Exact solver node budget");
    sch->add_option("--time-limit", schedule.timeLimit, "Exact solver time budget in seconds");

    RewriteArgs rewrite;
    auto* rw = app.add_subcommand("rewrite", "Join variant playlists according to a schedule");
    rw->add_option("--master", rewrite.master, "Master playlist")->required()->check(CLI::ExistingFile);
    rw->add_option("--variants", rewrite.variants, "Variant playlists, in master order")
        ->required()
        ->delimiter(',')
        ->check(CLI::ExistingFile);
    rw->add_option("--schedule", rewrite.schedule, "Schedule CSV")->required()->check(CLI::ExistingFile);
    rw->add_option("--user", rewrite.user, "User index (0-based)");
    rw->add_option("--slot", rewrite.slot, "Current slot (1-based)");
    rw->add_option("--refresh", rewrite.refresh, "Playlist refresh interval in seconds");
    rw->add_option("--slots", rewrite.slots, "Schedule horizon in slots (default: inferred)");

    OracleArgs oracleArgs;
    auto* oc = app.add_subcommand("oracle-check", "Compare the exact solver with brute force");
    oc->add_option("--max-slots", oracleArgs.maxSlots, "Largest horizon (segments never exceed slots)");
    oc->add_option("--instances", oracleArgs.instances, "Number of random instances");
    oc->add_option("--seed", oracleArgs.seed, "Generator seed");

    CLI11_PARSE(app, argc, argv);

    if (*sim) return guarded([&] { return runSimulate(simulate); });
    if (*sch) return guarded([&] { return runSchedule(schedule); });
    if (*rw) return guarded([&] { return runRewrite(rewrite); });
    if (*oc) return guarded([&] { return runOracle(oracleArgs); });
    return kUsage;
}
