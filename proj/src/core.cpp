#include "antsched/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "antsched/error.hpp"

namespace antsched {

std::size_t countFitting(double sizeMB, double capacityMB) {
    if (!(sizeMB > 0.0)) throw DomainError("segment size must be positive");
    if (!(capacityMB > 0.0)) return 0;
    auto n = static_cast<std::size_t>(std::floor(capacityMB / sizeMB));
    if (fitsWithin(static_cast<double>(n + 1) * sizeMB, capacityMB)) ++n;
    while (n > 0 && !fitsWithin(static_cast<double>(n) * sizeMB, capacityMB)) --n;
    return n;
}

// ---------------------------------------------------------------- QualityLadder

QualityLadder::QualityLadder(std::vector<QualityLevel> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) throw ConfigError("quality ladder needs at least one level");
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const auto& l = levels_[i];
        if (!(l.sizeMB > 0.0) || !std::isfinite(l.sizeMB))
            throw ConfigError("quality level " + std::to_string(i) + ": size must be positive");
        if (l.advertisedBandwidth <= 0)
            throw ConfigError("quality level " + std::to_string(i) + ": bandwidth must be positive");
        if (i > 0 && !(l.sizeMB > levels_[i - 1].sizeMB))
            throw ConfigError("quality levels must be strictly increasing by size");
        if (i > 0 && l.advertisedBandwidth <= levels_[i - 1].advertisedBandwidth)
            throw ConfigError("advertised bandwidth must increase with size");
    }
}

QualityLadder QualityLadder::defaultLadder() {
    return QualityLadder({{1.77, 1'000'000, "low"}, {3.69, 1'500'000, "med"}, {4.51, 3'000'000, "high"}});
}

QualityLadder QualityLadder::fromSizes(std::span<const double> sizesMB) {
    std::vector<QualityLevel> levels;
    levels.reserve(sizesMB.size());
    long long previous = 0;
    for (std::size_t i = 0; i < sizesMB.size(); ++i) {
        // MB per 10 s segment -> bit/s, bumped to stay strictly increasing
        const auto bw = std::max(static_cast<long long>(std::llround(sizesMB[i] * 8e6 / 10.0)), previous + 1);
        levels.push_back({sizesMB[i], bw, "q" + std::to_string(i)});
        previous = bw;
    }
    return QualityLadder(std::move(levels));
}

QualityLadder QualityLadder::scaled(double factor) const {
    if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
    auto copy = levels_;
    for (auto& l : copy) l.sizeMB *= factor;
    return QualityLadder(std::move(copy));
}

// --------------------------------------------------------------------- Scenario

Scenario::Scenario(std::size_t numSegments, double slotSeconds,
                   std::vector<std::vector<double>> capacityMB)
    : numSegments_(numSegments), slotSeconds_(slotSeconds), capacity_(std::move(capacityMB)) {
    if (capacity_.empty()) throw ConfigError("scenario needs at least one user");
    const std::size_t slots = capacity_.front().size();
    if (slots == 0) throw ConfigError("scenario needs at least one slot");
    if (numSegments_ == 0 || numSegments_ > slots)
        throw ConfigError("numSegments must be in [1, numSlots]");
    if (!(slotSeconds_ > 0.0) || !std::isfinite(slotSeconds_))
        throw ConfigError("slotSeconds must be positive");
    for (std::size_t u = 0; u < capacity_.size(); ++u) {
        if (capacity_[u].size() != slots)
            throw ConfigError("capacity row " + std::to_string(u) + " has wrong length");
        for (double c : capacity_[u])
            if (!std::isfinite(c) || c < 0.0)
                throw ConfigError("capacities must be finite and non-negative");
    }
}

Scenario Scenario::scaled(double factor) const {
    if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
    auto copy = capacity_;
    for (auto& row : copy)
        for (auto& c : row) c *= factor;
    return {numSegments_, slotSeconds_, std::move(copy)};
}

// --------------------------------------------------------------------- Schedule

bool UserSchedule::stalled() const noexcept {
    return std::any_of(segments.begin(), segments.end(),
                       [](const Assignment& a) { return a.deferred(); });
}

std::size_t Schedule::effectiveSlot(std::size_t user, std::size_t segment) const {
    const auto& a = users.at(user).segments.at(segment);
    return a.slot.value_or(numSlots);
}

void ObjectiveWeights::validate() const {
    for (double w : {lateness, quality, buffer})
        if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("objective weights must be non-negative");
    if (lateness == 0.0 && quality == 0.0 && buffer == 0.0)
        throw ConfigError("objective weights must not all be zero");
}

// ---------------------------------------------------------------------- metrics

std::vector<std::size_t> bufferTimeline(const Schedule& schedule, std::size_t user) {
    const auto& segs = schedule.users.at(user).segments;
    std::vector<std::size_t> downloadsIn(schedule.numSlots, 0);
    for (const auto& a : segs)
        if (a.slot && *a.slot < schedule.numSlots) ++downloadsIn[*a.slot];

    std::vector<std::size_t> timeline(schedule.numSlots, 0);
    std::size_t cumulative = 0;
    for (std::size_t t = 0; t < schedule.numSlots; ++t) {
        cumulative += downloadsIn[t];
        timeline[t] = cumulative > t + 1 ? cumulative - (t + 1) : 0;
    }
    return timeline;
}

std::size_t totalLateness(const Schedule& schedule, std::size_t user) {
    std::size_t total = 0;
    const auto n = schedule.users.at(user).segments.size();
    for (std::size_t s = 0; s < n; ++s) total += lateness(schedule.effectiveSlot(user, s), s);
    return total;
}

ObjectiveTerms objectiveTerms(const Schedule& schedule, const QualityLadder& ladder) {
    ObjectiveTerms terms;
    for (std::size_t u = 0; u < schedule.users.size(); ++u) {
        terms.latenessSlots += static_cast<double>(totalLateness(schedule, u));
        for (const auto& a : schedule.users[u].segments) terms.qualityMB += ladder.sizeOf(a.quality);
        for (auto b : bufferTimeline(schedule, u)) terms.bufferSegments += static_cast<double>(b);
    }
    return terms;
}

double objectiveValue(const Schedule& schedule, const QualityLadder& ladder,
                      const ObjectiveWeights& weights) {
    weights.validate();
    return objectiveTerms(schedule, ladder).value(weights);
}

const char* toString(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::UserCountMismatch: return "user-count-mismatch";
        case ViolationKind::SegmentCountMismatch: return "segment-count-mismatch";
        case ViolationKind::SlotOutOfRange: return "slot-out-of-range";
        case ViolationKind::QualityOutOfRange: return "quality-out-of-range";
        case ViolationKind::CapacityOverrun: return "capacity-overrun";
    }
    return "unknown";
}

std::string Violation::describe() const {
    std::ostringstream os;
    os << toString(kind) << " user=" << user << " slot=" << slot << " segment=" << segment
       << " magnitude=" << magnitude;
    return os.str();
}

ValidationResult validateSchedule(const Schedule& schedule, const Scenario& scenario,
                                  const QualityLadder& ladder) {
    ValidationResult result;
    auto& out = result.violations;
    if (schedule.users.size() != scenario.numUsers()) {
        out.push_back({ViolationKind::UserCountMismatch, 0, 0, 0,
                       static_cast<double>(schedule.users.size())});
        return result;
    }
    if (schedule.numSlots != scenario.numSlots())
        out.push_back({ViolationKind::SlotOutOfRange, 0, schedule.numSlots, 0,
                       static_cast<double>(schedule.numSlots)});

    const std::size_t slots = scenario.numSlots();
    for (std::size_t u = 0; u < scenario.numUsers(); ++u) {
        const auto& segs = schedule.users[u].segments;
        if (segs.size() != scenario.numSegments())
            out.push_back({ViolationKind::SegmentCountMismatch, u, 0, segs.size(),
                           static_cast<double>(segs.size())});

        std::vector<double> load(slots, 0.0);
        for (std::size_t s = 0; s < segs.size(); ++s) {
            const auto& a = segs[s];
            const bool qualityOk = a.quality < ladder.size();
            if (!qualityOk)
                out.push_back({ViolationKind::QualityOutOfRange, u, a.slot.value_or(slots), s,
                               static_cast<double>(a.quality)});
            if (a.deferred()) continue;
            if (*a.slot >= slots) {
                out.push_back({ViolationKind::SlotOutOfRange, u, *a.slot, s, static_cast<double>(*a.slot)});
                continue;
            }
            if (qualityOk) load[*a.slot] += ladder.sizeOf(a.quality);
        }
        for (std::size_t t = 0; t < slots; ++t) {
            const double cap = scenario.capacity(u, t);
            if (!fitsWithin(load[t], cap))
                out.push_back({ViolationKind::CapacityOverrun, u, t, 0, load[t] - cap});
        }
    }
    return result;
}

MetricsReport computeMetrics(const Schedule& schedule, const Scenario& scenario,
                             const QualityLadder& ladder, const ObjectiveWeights& weights) {
    const auto validation = validateSchedule(schedule, scenario, ladder);
    if (!validation.ok())
        throw ConsistencyError("cannot compute metrics of an invalid schedule: " +
                               validation.violations.front().describe());

    MetricsReport report;
    const auto users = scenario.numUsers();
    const auto segments = scenario.numSegments();
    const auto slots = scenario.numSlots();
    const double slotSeconds = scenario.slotSeconds();

    double qualitySum = 0.0;
    double latenessSlots = 0.0;
    double bufferSum = 0.0;
    for (std::size_t u = 0; u < users; ++u) {
        UserMetrics um;
        double uq = 0.0;
        std::size_t ul = 0;
        for (std::size_t s = 0; s < segments; ++s) {
            const auto& a = schedule.users[u].segments[s];
            uq += ladder.sizeOf(a.quality);
            const auto l = lateness(schedule.effectiveSlot(u, s), s);
            ul += l;
            if (l > 0) ++um.lateSegments;
            if (a.deferred()) ++um.deferredSegments;
        }
        std::size_t ub = 0;
        for (auto b : bufferTimeline(schedule, u)) ub += b;

        um.avgQualityMB = uq / static_cast<double>(segments);
        um.latenessSeconds = static_cast<double>(ul) * slotSeconds;
        um.avgBufferSegments = static_cast<double>(ub) / static_cast<double>(slots);
        report.users.push_back(um);

        qualitySum += uq;
        latenessSlots += static_cast<double>(ul);
        bufferSum += static_cast<double>(ub);
    }
    const auto nUsers = static_cast<double>(users);
    report.avgQualityMB = qualitySum / (nUsers * static_cast<double>(segments));
    report.avgLatenessSeconds = latenessSlots / nUsers * slotSeconds;
    report.perSegmentLatenessSeconds = latenessSlots / (nUsers * static_cast<double>(segments)) * slotSeconds;
    report.avgBufferSegments = bufferSum / (nUsers * static_cast<double>(slots));
    report.objectiveValue = objectiveValue(schedule, ladder, weights);
    return report;
}

}  // namespace antsched
