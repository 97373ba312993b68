#pragma once

// Exhaustive reference solver. Deliberately shares nothing with the production search:
// it enumerates every (slot, quality) assignment and evaluates the objective from scratch.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "antsched/core.hpp"

namespace antsched::oracle {

struct BruteForceResult {
    double objective = 0.0;
    std::vector<std::size_t> slots;
    std::vector<std::size_t> qualities;
};

/// Optimum for one user, or nullopt when no assignment keeps all segments inside the horizon.
[[nodiscard]] std::optional<BruteForceResult> bruteForceUser(std::span<const double> capsMB, std::size_t segments,
                                                             std::span<const double> sizesMB,
                                                             const ObjectiveWeights& weights);

/// Sum of per-user optima; nullopt if any user is infeasible.
[[nodiscard]] std::optional<double> bruteForceObjective(const Scenario& scenario, const QualityLadder& ladder,
                                                        const ObjectiveWeights& weights);

struct Instance {
    Scenario scenario;
    QualityLadder ladder;
};

/// Random desk-scale instance: 1..maxSlots slots, 1..min(slots, maxSegments) segments,
/// 1..maxLevels quality levels, capacities that include outages and exact fits.
[[nodiscard]] Instance randomInstance(std::mt19937_64& rng, std::size_t maxSlots, std::size_t maxSegments,
                                      std::size_t maxLevels, std::size_t users = 1);

struct OracleCheckReport {
    std::size_t instances = 0;
    std::size_t feasible = 0;
    std::size_t mismatches = 0;
    double seconds = 0.0;
};

/// Compares the production exact solver against brute force on random instances.
[[nodiscard]] OracleCheckReport runOracleCheck(std::size_t maxSlots, std::size_t instances, std::uint64_t seed,
                                               const ObjectiveWeights& weights = {});

}  // namespace antsched::oracle
