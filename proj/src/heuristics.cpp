#include <algorithm>

#include "antsched/error.hpp"
#include "antsched/schedulers.hpp"

namespace antsched::sched {

namespace {

/// Best level that still fits when `loadMB` of the slot is already used.
std::optional<std::size_t> bestQualityOnTop(const QualityLadder& ladder, double loadMB, double capacityMB) {
    for (std::size_t q = ladder.size(); q-- > 0;)
        if (fitsWithin(loadMB + ladder.sizeOf(q), capacityMB)) return q;
    return std::nullopt;
}

/// Segments not placed by the end of the horizon are downloaded after it at the lowest quality.
void deferRemaining(UserSchedule& user, std::size_t next) {
    for (std::size_t s = next; s < user.segments.size(); ++s) user.segments[s] = {std::nullopt, 0};
}

Schedule emptySchedule(const Scenario& scenario) {
    Schedule schedule;
    schedule.numSlots = scenario.numSlots();
    schedule.users.assign(scenario.numUsers(), UserSchedule{std::vector<Assignment>(scenario.numSegments())});
    return schedule;
}

}  // namespace

void GreedyConfig::validate() const {
    if (maxBufferSegments < 1) throw ConfigError("maxBufferSegments must be at least 1");
}

void SolverBudget::validate() const {
    if (maxNodes && *maxNodes == 0) throw ConfigError("maxNodes must be positive");
    if (timeLimitSeconds && !(*timeLimitSeconds > 0.0)) throw ConfigError("timeLimit must be positive");
}

std::optional<std::size_t> getBestQuality(const QualityLadder& ladder, double capacityMB) {
    return bestQualityOnTop(ladder, 0.0, capacityMB);
}

std::size_t getSegmentsForQuality(double qualitySizeMB, double capacityMB) {
    return countFitting(qualitySizeMB, capacityMB);
}

std::optional<std::size_t> getBestQualityRange(const QualityLadder& ladder, std::size_t n,
                                               std::span<const double> capsMB) {
    if (capsMB.empty()) throw DomainError("getBestQualityRange needs at least one slot");
    for (std::size_t q = ladder.size(); q-- > 0;) {
        std::size_t packed = 0;
        for (double c : capsMB) {
            packed += getSegmentsForQuality(ladder.sizeOf(q), c);
            if (packed >= n) return q;
        }
    }
    return std::nullopt;
}

// ------------------------------------------------------------------ BufferFirst

Schedule bufferFirst(const Scenario& scenario, const QualityLadder& ladder, const GreedyConfig& config) {
    config.validate();
    auto schedule = emptySchedule(scenario);
    const auto segments = scenario.numSegments();
    const double lowest = ladder.lowestSize();

    for (std::size_t u = 0; u < scenario.numUsers(); ++u) {
        auto& user = schedule.users[u];
        std::size_t next = 0;
        for (std::size_t t = 0; t < scenario.numSlots() && next < segments; ++t) {
            const double cap = scenario.capacity(u, t);
            // end-of-slot buffer (next + n) - (t + 1) must stay <= maxBuffer
            const std::size_t room = t + 1 + config.maxBufferSegments - next;
            const std::size_t n = std::min({room, segments - next, countFitting(lowest, cap)});
            if (n == 0) continue;

            std::vector<std::size_t> quality(n, 0);
            double load = static_cast<double>(n) * lowest;
            for (std::size_t i = n; i-- > 0;) {
                const auto q = bestQualityOnTop(ladder, load - lowest, cap);
                if (!q || *q == 0) break;
                quality[i] = *q;
                load += ladder.sizeOf(*q) - lowest;
            }
            for (std::size_t i = 0; i < n; ++i) user.segments[next + i] = {t, quality[i]};
            next += n;
        }
        deferRemaining(user, next);
    }
    return schedule;
}

// ----------------------------------------------------------------- QualityFirst

Schedule qualityFirst(const Scenario& scenario, const QualityLadder& ladder, const GreedyConfig& config) {
    config.validate();
    auto schedule = emptySchedule(scenario);
    const auto segments = scenario.numSegments();

    for (std::size_t u = 0; u < scenario.numUsers(); ++u) {
        auto& user = schedule.users[u];
        std::size_t next = 0;
        for (std::size_t t = 0; t < scenario.numSlots() && next < segments; ++t) {
            const double cap = scenario.capacity(u, t);
            double load = 0.0;
            while (next < segments && next < t + 1 + config.maxBufferSegments) {
                const auto q = bestQualityOnTop(ladder, load, cap);
                if (!q) break;
                user.segments[next++] = {t, *q};
                load += ladder.sizeOf(*q);
            }
        }
        deferRemaining(user, next);
    }
    return schedule;
}

// ------------------------------------------------------------------------- Fill

UserSchedule fillUser(std::span<const double> caps, std::size_t numSegments, const QualityLadder& ladder) {
    UserSchedule user{std::vector<Assignment>(numSegments)};
    std::vector<std::size_t> perSlot(caps.size(), 0);  // segments currently assigned to each slot
    std::size_t s = 0;

    for (std::size_t t = 0; t < caps.size() && s < numSegments; ++t) {
        if (const auto q = getBestQuality(ladder, caps[t])) {
            user.segments[s++] = {t, *q};
            ++perSlot[t];
            continue;
        }
        // outage: walk back until [g..t] holds its segments plus segment s
        std::size_t inRange = 0;
        for (std::size_t g = t + 1; g-- > 0;) {
            inRange += perSlot[g];
            const auto window = caps.subspan(g, t - g + 1);
            const auto q = getBestQualityRange(ladder, inRange + 1, window);
            if (!q) continue;

            const double size = ladder.sizeOf(*q);
            std::size_t v = s - inRange;  // segments are packed in index order
            for (std::size_t r = g; r <= t; ++r) {
                const std::size_t n = std::min(getSegmentsForQuality(size, caps[r]), s + 1 - v);
                perSlot[r] = n;
                for (std::size_t i = 0; i < n; ++i) user.segments[v++] = {r, *q};
            }
            ++s;
            break;
        }
        // no range found: segment s is retried in the next slot and becomes late
    }
    deferRemaining(user, s);
    return user;
}

Schedule fill(const Scenario& scenario, const QualityLadder& ladder) {
    Schedule schedule;
    schedule.numSlots = scenario.numSlots();
    for (std::size_t u = 0; u < scenario.numUsers(); ++u)
        schedule.users.push_back(fillUser(scenario.userCapacity(u), scenario.numSegments(), ladder));
    return schedule;
}

// -------------------------------------------------------------------- dispatch

std::string_view name(SchedulerKind kind) noexcept {
    switch (kind) {
        case SchedulerKind::BufferFirst: return "bufferFirst";
        case SchedulerKind::QualityFirst: return "qualityFirst";
        case SchedulerKind::Fill: return "fill";
        case SchedulerKind::Exact: return "exact";
    }
    return "unknown";
}

SchedulerKind parseSchedulerKind(std::string_view text) {
    for (auto kind : kAllSchedulers)
        if (name(kind) == text) return kind;
    throw ConfigError("unknown scheduler '" + std::string(text) +
                      "' (expected bufferFirst, qualityFirst, fill or exact)");
}

SchedulerRun runScheduler(SchedulerKind kind, const Scenario& scenario, const QualityLadder& ladder,
                          const ObjectiveWeights& weights, const GreedyConfig& greedy,
                          const SolverBudget& budget) {
    switch (kind) {
        case SchedulerKind::BufferFirst: return {SolveStatus::Optimal, bufferFirst(scenario, ladder, greedy), 0};
        case SchedulerKind::QualityFirst: return {SolveStatus::Optimal, qualityFirst(scenario, ladder, greedy), 0};
        case SchedulerKind::Fill: return {SolveStatus::Optimal, fill(scenario, ladder), 0};
        case SchedulerKind::Exact: {
            auto r = exactOptimize(scenario, ladder, weights, budget);
            return {r.status, std::move(r.schedule), r.nodes};
        }
    }
    throw ConfigError("unknown scheduler kind");
}

}  // namespace antsched::sched
