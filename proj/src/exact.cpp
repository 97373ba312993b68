// Exact solver for the per-user scheduling problem.
//
// Two facts make the search tractable:
//  * Some optimal schedule downloads segments in index order. Swapping the (slot, quality)
//    pairs of two segments leaves every slot load, the buffer timeline and the quality sum
//    unchanged, and lateness max(d - s, 0) is convex, so sorting slots by segment index
//    never increases it.
//  * With segment order fixed, the future only depends on (slot, segments downloaded so
//    far). Two search nodes with the same pair are compared directly and the worse one is
//    dropped.
// The search walks slots in order and branches on how many segments slot t downloads; the
// qualities inside a slot come from a best-fill table (largest size sum for n segments).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "antsched/error.hpp"
#include "antsched/schedulers.hpp"

namespace antsched::sched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

bool nearlyEqual(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Best size sum for exactly n segments in one slot, with the level counts achieving it.
struct SlotFill {
    double sizeSum = -kInf;
    std::vector<std::size_t> counts;  // per level
};

class BestFill {
public:
    /// With qualityMatters false every size sum is worth the same, so the tie-break picks
    /// the lowest level throughout.
    BestFill(const QualityLadder& ladder, double capacity, std::size_t maxSegments, bool qualityMatters)
        : ladder_(ladder), capacity_(capacity) {
        const std::size_t fit = std::min(countFitting(ladder.lowestSize(), capacity), maxSegments);
        table_.resize(fit + 1);
        for (std::size_t n = 0; n <= fit; ++n) {
            std::vector<std::size_t> counts(ladder.size(), 0);
            if (qualityMatters) {
                search(n, ladder.size() - 1, 0.0, counts, table_[n]);
            } else {
                counts[0] = n;
                table_[n] = {static_cast<double>(n) * ladder.lowestSize(), counts};
            }
        }
    }

    [[nodiscard]] std::size_t maxCount() const noexcept { return table_.size() - 1; }
    [[nodiscard]] const SlotFill& operator[](std::size_t n) const { return table_[n]; }

private:
    // Enumerate counts of the levels above `level` outside, close the lowest two in O(1).
    void search(std::size_t remaining, std::size_t level, double load, std::vector<std::size_t>& counts,
                SlotFill& best) const {
        if (level == 0) {
            const double total = load + static_cast<double>(remaining) * ladder_.sizeOf(0);
            if (!fitsWithin(total, capacity_)) return;
            counts[0] = remaining;
            consider(total, counts, best);
            counts[0] = 0;
            return;
        }
        if (level == 1) {
            const double low = ladder_.sizeOf(0);
            const double step = ladder_.sizeOf(1) - low;
            const double base = load + static_cast<double>(remaining) * low;
            if (!fitsWithin(base, capacity_)) return;
            std::size_t up = std::min(remaining, static_cast<std::size_t>(std::max(0.0, std::floor((capacity_ - base) / step))));
            while (up < remaining && fitsWithin(base + static_cast<double>(up + 1) * step, capacity_)) ++up;
            while (up > 0 && !fitsWithin(base + static_cast<double>(up) * step, capacity_)) --up;
            counts[1] = up;
            counts[0] = remaining - up;
            consider(base + static_cast<double>(up) * step, counts, best);
            counts[1] = counts[0] = 0;
            return;
        }
        const double size = ladder_.sizeOf(level);
        for (std::size_t k = 0; k <= remaining; ++k) {
            const double withTop = load + static_cast<double>(k) * size +
                                   static_cast<double>(remaining - k) * ladder_.sizeOf(0);
            if (!fitsWithin(withTop, capacity_)) break;
            counts[level] = k;
            search(remaining - k, level - 1, load + static_cast<double>(k) * size, counts, best);
        }
        counts[level] = 0;
    }

    static void consider(double total, const std::vector<std::size_t>& counts, SlotFill& best) {
        // strictly better only: ties keep the earlier candidate (fewer high-level segments)
        if (best.counts.empty() || (total > best.sizeSum && !nearlyEqual(total, best.sizeSum))) {
            best.sizeSum = total;
            best.counts = counts;
        }
    }

    const QualityLadder& ladder_;
    double capacity_;
    std::vector<SlotFill> table_;
};

struct UserSolve {
    SolveStatus status = SolveStatus::Infeasible;
    UserSchedule schedule;
    std::size_t nodes = 0;
};

class UserSearch {
public:
    UserSearch(std::span<const double> caps, std::size_t segments, const QualityLadder& ladder,
               const ObjectiveWeights& weights)
        : caps_(caps), slots_(caps.size()), segments_(segments), ladder_(ladder), weights_(weights) {
        fills_.reserve(slots_);
        for (double c : caps_) fills_.emplace_back(ladder_, c, segments_, weights_.quality > 0.0);
        suffixCapacity_.assign(slots_ + 1, 0);
        for (std::size_t t = slots_; t-- > 0;)
            suffixCapacity_[t] = suffixCapacity_[t + 1] + fills_[t].maxCount();
    }

    UserSolve solve(const SolverBudget& budget, std::chrono::steady_clock::time_point start,
                    std::size_t nodesSoFar) {
        UserSolve out;
        out.nodes = nodesSoFar;
        if (suffixCapacity_[0] < segments_) return out;

        // incumbent: download as much as possible as early as possible
        std::vector<std::size_t> diveCounts(slots_, 0);
        double incumbent = 0.0;
        {
            std::size_t done = 0;
            for (std::size_t t = 0; t < slots_; ++t) {
                const std::size_t n = std::min(fills_[t].maxCount(), segments_ - done);
                incumbent += transitionCost(t, done, n);
                diveCounts[t] = n;
                done += n;
            }
        }

        // layer t holds nodes "before slot t" indexed by segments done
        const std::size_t width = segments_ + 1;
        std::vector<double> cost((slots_ + 1) * width, kInf);
        std::vector<std::size_t> parent((slots_ + 1) * width, kNone);
        auto at = [width](std::size_t t, std::size_t k) { return t * width + k; };
        cost[at(0, 0)] = 0.0;

        bool exhausted = false;
        for (std::size_t t = 0; t < slots_ && !exhausted; ++t) {
            for (std::size_t k = 0; k <= segments_ && !exhausted; ++k) {
                const double base = cost[at(t, k)];
                if (base == kInf) continue;
                const std::size_t maxN = std::min(fills_[t].maxCount(), segments_ - k);
                for (std::size_t n = 0; n <= maxN; ++n) {
                    if (++out.nodes % 1024 == 0 || (budget.maxNodes && out.nodes > *budget.maxNodes)) {
                        if (overBudget(budget, out.nodes, start)) {
                            exhausted = true;
                            break;
                        }
                    }
                    const std::size_t next = k + n;
                    if (segments_ - next > suffixCapacity_[t + 1]) continue;
                    const double value = base + transitionCost(t, k, n);
                    if (value + lowerBound(t + 1, next) > incumbent &&
                        !nearlyEqual(value + lowerBound(t + 1, next), incumbent))
                        continue;
                    double& slot = cost[at(t + 1, next)];
                    if (value < slot && !nearlyEqual(value, slot)) {
                        slot = value;
                        parent[at(t + 1, next)] = k;
                    } else if (nearlyEqual(value, slot) &&
                               earlierDownloads(parent, width, t, k, parent[at(t + 1, next)], next)) {
                        slot = value;
                        parent[at(t + 1, next)] = k;
                    }
                }
            }
        }

        std::vector<std::size_t> counts(slots_, 0);
        if (exhausted || cost[at(slots_, segments_)] == kInf) {
            // budget ran out (or every path was cut by the incumbent bound): keep the dive
            counts = diveCounts;
            out.status = exhausted ? SolveStatus::BudgetExceeded : SolveStatus::Optimal;
        } else {
            std::size_t k = segments_;
            for (std::size_t t = slots_; t-- > 0;) {
                const std::size_t prev = parent[at(t + 1, k)];
                counts[t] = k - prev;
                k = prev;
            }
            out.status = SolveStatus::Optimal;
        }
        out.schedule = materialize(counts);
        return out;
    }

private:
    [[nodiscard]] double transitionCost(std::size_t t, std::size_t done, std::size_t n) const {
        double late = 0.0;
        for (std::size_t s = done; s < done + n; ++s) late += static_cast<double>(lateness(t, s));
        const std::size_t after = done + n;
        const double buffered = after > t + 1 ? static_cast<double>(after - (t + 1)) : 0.0;
        return weights_.lateness * late - weights_.quality * fills_[t][n].sizeSum + weights_.buffer * buffered;
    }

    // remaining segments at best quality, each no earlier than slot t, no buffer
    [[nodiscard]] double lowerBound(std::size_t t, std::size_t done) const {
        double late = 0.0;
        for (std::size_t s = done; s < segments_ && s < t; ++s) late += static_cast<double>(t - s);
        return weights_.lateness * late -
               weights_.quality * static_cast<double>(segments_ - done) * ladder_.highestSize();
    }

    // True when the path through (t, k) gives a lexicographically smaller slot vector for the
    // segments done after slot t than the path through (t, other).
    [[nodiscard]] bool earlierDownloads(const std::vector<std::size_t>& parent, std::size_t width, std::size_t t,
                                        std::size_t k, std::size_t other, std::size_t next) const {
        if (other == kNone) return true;
        auto a = slotsOfPath(parent, width, t, k);
        auto b = slotsOfPath(parent, width, t, other);
        a.resize(next, t);
        b.resize(next, t);
        return a < b;
    }

    // Slot of every segment downloaded before slot t on the path ending at (t, k).
    [[nodiscard]] std::vector<std::size_t> slotsOfPath(const std::vector<std::size_t>& parent, std::size_t width,
                                                       std::size_t t, std::size_t k) const {
        std::vector<std::size_t> slots(k);
        for (std::size_t layer = t; layer > 0; --layer) {
            const std::size_t prev = parent[layer * width + k];
            for (std::size_t s = prev; s < k; ++s) slots[s] = layer - 1;
            k = prev;
        }
        return slots;
    }

    [[nodiscard]] UserSchedule materialize(const std::vector<std::size_t>& counts) const {
        UserSchedule user{std::vector<Assignment>(segments_)};
        std::size_t s = 0;
        for (std::size_t t = 0; t < slots_; ++t) {
            if (counts[t] == 0) continue;
            const auto& fill = fills_[t][counts[t]];
            // lower qualities go to earlier segments of the slot
            for (std::size_t q = 0; q < fill.counts.size(); ++q)
                for (std::size_t i = 0; i < fill.counts[q]; ++i) user.segments[s++] = {t, q};
        }
        return user;
    }

    static bool overBudget(const SolverBudget& budget, std::size_t nodes, std::chrono::steady_clock::time_point start) {
        if (budget.maxNodes && nodes > *budget.maxNodes) return true;
        if (budget.timeLimitSeconds) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            if (elapsed.count() > *budget.timeLimitSeconds) return true;
        }
        return false;
    }

    std::span<const double> caps_;
    std::size_t slots_;
    std::size_t segments_;
    const QualityLadder& ladder_;
    const ObjectiveWeights& weights_;
    std::vector<BestFill> fills_;
    std::vector<std::size_t> suffixCapacity_;
};

}  // namespace

const char* toString(SolveStatus status) noexcept {
    switch (status) {
        case SolveStatus::Optimal: return "ok";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::BudgetExceeded: return "budget_exceeded";
    }
    return "unknown";
}

ExactResult exactOptimize(const Scenario& scenario, const QualityLadder& ladder, const ObjectiveWeights& weights,
                          const SolverBudget& budget) {
    weights.validate();
    budget.validate();
    const auto start = std::chrono::steady_clock::now();

    ExactResult result;
    Schedule schedule;
    schedule.numSlots = scenario.numSlots();
    bool budgetHit = false;
    for (std::size_t u = 0; u < scenario.numUsers(); ++u) {
        UserSearch search(scenario.userCapacity(u), scenario.numSegments(), ladder, weights);
        auto solved = search.solve(budget, start, result.nodes);
        result.nodes = solved.nodes;
        if (solved.status == SolveStatus::Infeasible) {
            result.infeasibleUsers.push_back(u);
            continue;
        }
        budgetHit = budgetHit || solved.status == SolveStatus::BudgetExceeded;
        schedule.users.push_back(std::move(solved.schedule));
    }
    if (!result.infeasibleUsers.empty()) {
        result.status = SolveStatus::Infeasible;
        return result;
    }
    result.status = budgetHit ? SolveStatus::BudgetExceeded : SolveStatus::Optimal;
    result.schedule = std::move(schedule);
    return result;
}

}  // namespace antsched::sched
