#include "brute_force.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "antsched/schedulers.hpp"

namespace antsched::oracle {

std::optional<BruteForceResult> bruteForceUser(std::span<const double> caps, std::size_t segments,
                                               std::span<const double> sizes, const ObjectiveWeights& weights) {
    const std::size_t slots = caps.size();
    const std::size_t levels = sizes.size();
    std::optional<BruteForceResult> best;

    std::vector<std::size_t> d(segments, 0);
    std::vector<std::size_t> p(segments, 0);
    std::vector<double> load(slots, 0.0);

    while (true) {
        // lateness and buffer depend on d only
        double late = 0.0;
        for (std::size_t s = 0; s < segments; ++s) late += d[s] > s ? static_cast<double>(d[s] - s) : 0.0;
        double buffered = 0.0;
        for (std::size_t t = 0; t < slots; ++t) {
            std::size_t downloaded = 0;
            for (std::size_t s = 0; s < segments; ++s)
                if (d[s] <= t) ++downloaded;
            if (downloaded > t + 1) buffered += static_cast<double>(downloaded - (t + 1));
        }

        std::fill(p.begin(), p.end(), 0);
        while (true) {
            std::fill(load.begin(), load.end(), 0.0);
            double quality = 0.0;
            for (std::size_t s = 0; s < segments; ++s) {
                load[d[s]] += sizes[p[s]];
                quality += sizes[p[s]];
            }
            bool feasible = true;
            for (std::size_t t = 0; t < slots && feasible; ++t) feasible = fitsWithin(load[t], caps[t]);
            if (feasible) {
                const double value = weights.lateness * late - weights.quality * quality + weights.buffer * buffered;
                if (!best || value < best->objective) best = BruteForceResult{value, d, p};
            }
            std::size_t i = 0;
            while (i < segments && ++p[i] == levels) p[i++] = 0;
            if (i == segments) break;
        }

        std::size_t i = 0;
        while (i < segments && ++d[i] == slots) d[i++] = 0;
        if (i == segments) break;
    }
    return best;
}

std::optional<double> bruteForceObjective(const Scenario& scenario, const QualityLadder& ladder,
                                          const ObjectiveWeights& weights) {
    std::vector<double> sizes;
    for (const auto& l : ladder.levels()) sizes.push_back(l.sizeMB);
    double total = 0.0;
    for (std::size_t u = 0; u < scenario.numUsers(); ++u) {
        const auto r = bruteForceUser(scenario.userCapacity(u), scenario.numSegments(), sizes, weights);
        if (!r) return std::nullopt;
        total += r->objective;
    }
    return total;
}

Instance randomInstance(std::mt19937_64& rng, std::size_t maxSlots, std::size_t maxSegments, std::size_t maxLevels,
                        std::size_t users) {
    std::uniform_int_distribution<std::size_t> slotDist(1, maxSlots);
    const std::size_t slots = slotDist(rng);
    std::uniform_int_distribution<std::size_t> segDist(1, std::min(slots, maxSegments));
    const std::size_t segments = segDist(rng);
    std::uniform_int_distribution<std::size_t> levelDist(1, maxLevels);
    const std::size_t levels = levelDist(rng);

    // small integer sizes make exact fits and ties common
    std::uniform_int_distribution<int> stepDist(1, 3);
    std::vector<QualityLevel> ladder;
    double size = 0.0;
    for (std::size_t q = 0; q < levels; ++q) {
        size += stepDist(rng);
        ladder.push_back({size, static_cast<long long>(size * 1e6), "q" + std::to_string(q)});
    }

    std::uniform_int_distribution<int> capDist(0, static_cast<int>(3 * size));
    std::bernoulli_distribution outage(0.25);
    std::vector<std::vector<double>> caps(users, std::vector<double>(slots));
    for (auto& row : caps)
        for (auto& c : row) c = outage(rng) ? 0.0 : static_cast<double>(capDist(rng));
    return {Scenario(segments, 10.0, std::move(caps)), QualityLadder(std::move(ladder))};
}

OracleCheckReport runOracleCheck(std::size_t maxSlots, std::size_t instances, std::uint64_t seed,
                                 const ObjectiveWeights& weights) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed);
    OracleCheckReport report;
    for (std::size_t i = 0; i < instances; ++i) {
        const auto inst = randomInstance(rng, maxSlots, maxSlots, 3);
        const auto reference = bruteForceObjective(inst.scenario, inst.ladder, weights);
        const auto exact = sched::exactOptimize(inst.scenario, inst.ladder, weights);
        ++report.instances;
        const bool exactFeasible = exact.status != sched::SolveStatus::Infeasible;
        if (exactFeasible != reference.has_value()) {
            ++report.mismatches;
            continue;
        }
        if (!reference) continue;
        ++report.feasible;
        const double value = objectiveValue(*exact.schedule, inst.ladder, weights);
        const bool valid = validateSchedule(*exact.schedule, inst.scenario, inst.ladder).ok();
        if (!valid || std::abs(value - *reference) > 1e-6 * std::max(1.0, std::abs(*reference))) ++report.mismatches;
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace antsched::oracle
