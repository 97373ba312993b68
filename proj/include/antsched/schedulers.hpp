#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "antsched/core.hpp"

namespace antsched::sched {

struct GreedyConfig {
    std::size_t maxBufferSegments = 3;  // VLC default

    void validate() const;
};

/// Limits for exactOptimize; absent members mean "unlimited".
struct SolverBudget {
    std::optional<std::size_t> maxNodes;
    std::optional<double> timeLimitSeconds;

    void validate() const;
};

// -- helpers shared by the schedulers ------------------------------------------------

/// Largest level whose size fits in capacityMB.
[[nodiscard]] std::optional<std::size_t> getBestQuality(const QualityLadder& ladder, double capacityMB);

/// Largest level at which n whole segments pack earliest-first into the per-slot capacities.
[[nodiscard]] std::optional<std::size_t> getBestQualityRange(const QualityLadder& ladder, std::size_t n,
                                                             std::span<const double> capsMB);

/// floor(capacity / size).
[[nodiscard]] std::size_t getSegmentsForQuality(double qualitySizeMB, double capacityMB);

// -- schedulers ----------------------------------------------------------------------

/// Count-greedy: fill the buffer at the lowest quality, then upgrade with leftover capacity.
[[nodiscard]] Schedule bufferFirst(const Scenario& scenario, const QualityLadder& ladder,
                                   const GreedyConfig& config = {});

/// Quality-greedy: each next segment at the best quality the remaining capacity allows.
[[nodiscard]] Schedule qualityFirst(const Scenario& scenario, const QualityLadder& ladder,
                                    const GreedyConfig& config = {});

/// One segment per slot at the best quality; on an outage, walk back until a range of
/// slots can hold every segment in it plus the new one at one uniform quality.
[[nodiscard]] Schedule fill(const Scenario& scenario, const QualityLadder& ladder);

[[nodiscard]] UserSchedule fillUser(std::span<const double> capsMB, std::size_t numSegments,
                                    const QualityLadder& ladder);

enum class SolveStatus { Optimal, Infeasible, BudgetExceeded };

[[nodiscard]] const char* toString(SolveStatus status) noexcept;

struct ExactResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<Schedule> schedule;       ///< empty iff Infeasible
    std::vector<std::size_t> infeasibleUsers;
    std::size_t nodes = 0;                  ///< search nodes expanded over all users
};

/// Minimizes the weighted lateness / quality / buffer objective exactly. Segments never
/// leave the horizon; a user whose segments cannot all be placed makes the instance Infeasible.
[[nodiscard]] ExactResult exactOptimize(const Scenario& scenario, const QualityLadder& ladder,
                                        const ObjectiveWeights& weights, const SolverBudget& budget = {});

enum class SchedulerKind { BufferFirst, QualityFirst, Fill, Exact };

inline constexpr SchedulerKind kAllSchedulers[] = {SchedulerKind::BufferFirst, SchedulerKind::QualityFirst,
                                                   SchedulerKind::Fill, SchedulerKind::Exact};

[[nodiscard]] std::string_view name(SchedulerKind kind) noexcept;

/// Accepts "bufferFirst", "qualityFirst", "fill", "exact". Throws ConfigError otherwise.
[[nodiscard]] SchedulerKind parseSchedulerKind(std::string_view text);

struct SchedulerRun {
    SolveStatus status = SolveStatus::Optimal;  ///< heuristics always report Optimal
    std::optional<Schedule> schedule;
    std::size_t nodes = 0;
};

/// Uniform entry point used by the experiment harness and the CLI.
[[nodiscard]] SchedulerRun runScheduler(SchedulerKind kind, const Scenario& scenario, const QualityLadder& ladder,
                                        const ObjectiveWeights& weights, const GreedyConfig& greedy = {},
                                        const SolverBudget& budget = {});

}  // namespace antsched::sched
