#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace antsched {

/// Relative slack used for every "load fits in capacity" comparison.
inline constexpr double kCapacityTolerance = 1e-9;

/// Non-strict capacity check, robust against floating-point sums such as 2 * 4.51.
[[nodiscard]] inline bool fitsWithin(double load, double capacity) noexcept {
    const double scale = capacity > 1.0 ? capacity : 1.0;
    return load <= capacity + kCapacityTolerance * scale;
}

/// Largest n with n * size <= capacity (same tolerance as fitsWithin).
[[nodiscard]] std::size_t countFitting(double sizeMB, double capacityMB);

struct QualityLevel {
    double sizeMB = 0.0;               ///< megabytes per segment
    long long advertisedBandwidth = 0; ///< bits per second, as in BANDWIDTH=
    std::string variantLabel;          ///< opaque key, e.g. "low"
};

/// Ordered quality levels; index 0 is the lowest.
class QualityLadder {
public:
    /// Throws ConfigError unless sizes and bandwidths are strictly increasing and positive.
    explicit QualityLadder(std::vector<QualityLevel> levels);

    /// Default ladder: 1.77 / 3.69 / 4.51 MB at 1.0 / 1.5 / 3.0 Mbit/s.
    static QualityLadder defaultLadder();

    /// Ladder from sizes only; bandwidth derived as the rate of a 10 s segment.
    static QualityLadder fromSizes(std::span<const double> sizesMB);

    [[nodiscard]] std::size_t size() const noexcept { return levels_.size(); }
    [[nodiscard]] const QualityLevel& operator[](std::size_t i) const { return levels_.at(i); }
    [[nodiscard]] double sizeOf(std::size_t i) const { return levels_.at(i).sizeMB; }
    [[nodiscard]] double lowestSize() const noexcept { return levels_.front().sizeMB; }
    [[nodiscard]] double highestSize() const noexcept { return levels_.back().sizeMB; }
    [[nodiscard]] std::size_t highestIndex() const noexcept { return levels_.size() - 1; }
    [[nodiscard]] const std::vector<QualityLevel>& levels() const noexcept { return levels_; }

    /// Same ladder with every size multiplied by factor (> 0).
    [[nodiscard]] QualityLadder scaled(double factor) const;

private:
    std::vector<QualityLevel> levels_;
};

/// Anticipated per-user, per-slot download capacity in megabytes per slot.
class Scenario {
public:
    Scenario(std::size_t numSegments, double slotSeconds,
             std::vector<std::vector<double>> capacityMB);

    [[nodiscard]] std::size_t numUsers() const noexcept { return capacity_.size(); }
    [[nodiscard]] std::size_t numSlots() const noexcept { return capacity_.front().size(); }
    [[nodiscard]] std::size_t numSegments() const noexcept { return numSegments_; }
    [[nodiscard]] double slotSeconds() const noexcept { return slotSeconds_; }
    [[nodiscard]] double capacity(std::size_t user, std::size_t slot) const {
        return capacity_.at(user).at(slot);
    }
    [[nodiscard]] std::span<const double> userCapacity(std::size_t user) const {
        return capacity_.at(user);
    }
    [[nodiscard]] const std::vector<std::vector<double>>& capacityMatrix() const noexcept {
        return capacity_;
    }

    [[nodiscard]] Scenario scaled(double factor) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;

private:
    std::size_t numSegments_;
    double slotSeconds_;
    std::vector<std::vector<double>> capacity_;
};

/// Download decision for one segment. An empty slot means the segment could not
/// be placed inside the horizon and is downloaded after it (a stall).
struct Assignment {
    std::optional<std::size_t> slot;
    std::size_t quality = 0;

    [[nodiscard]] bool deferred() const noexcept { return !slot.has_value(); }
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct UserSchedule {
    std::vector<Assignment> segments;

    [[nodiscard]] bool stalled() const noexcept;
    friend bool operator==(const UserSchedule&, const UserSchedule&) = default;
};

struct Schedule {
    std::size_t numSlots = 0;
    std::vector<UserSchedule> users;

    /// Slot a segment is effectively downloaded in; numSlots for deferred segments.
    [[nodiscard]] std::size_t effectiveSlot(std::size_t user, std::size_t segment) const;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct ObjectiveWeights {
    double lateness = 440.0;
    double quality = 10.0;
    double buffer = 1.0;

    /// Throws ConfigError for negative or all-zero weights.
    void validate() const;
};

struct UserMetrics {
    double avgQualityMB = 0.0;
    double latenessSeconds = 0.0;   ///< summed over segments
    double avgBufferSegments = 0.0;
    std::size_t lateSegments = 0;
    std::size_t deferredSegments = 0;
};

struct MetricsReport {
    double avgQualityMB = 0.0;
    double avgLatenessSeconds = 0.0;  ///< per-user lateness sum, averaged over users
    double avgBufferSegments = 0.0;
    double objectiveValue = 0.0;
    double perSegmentLatenessSeconds = 0.0;  ///< diagnostic: mean over all segments
    std::vector<UserMetrics> users;
};

/// max(downloadSlot - segmentIndex, 0).
[[nodiscard]] constexpr std::size_t lateness(std::size_t downloadSlot,
                                             std::size_t segmentIndex) noexcept {
    return downloadSlot > segmentIndex ? downloadSlot - segmentIndex : 0;
}

/// Downloaded-but-unplayed segments at the end of each slot (after playout of segment t).
[[nodiscard]] std::vector<std::size_t> bufferTimeline(const Schedule& schedule, std::size_t user);

[[nodiscard]] std::size_t totalLateness(const Schedule& schedule, std::size_t user);

struct ObjectiveTerms {
    double latenessSlots = 0.0;
    double qualityMB = 0.0;
    double bufferSegments = 0.0;

    [[nodiscard]] double value(const ObjectiveWeights& w) const noexcept {
        return w.lateness * latenessSlots - w.quality * qualityMB + w.buffer * bufferSegments;
    }
};

[[nodiscard]] ObjectiveTerms objectiveTerms(const Schedule& schedule, const QualityLadder& ladder);

/// W_l * sum lateness - W_q * sum sizes + W_b * sum buffer; lower is better.
[[nodiscard]] double objectiveValue(const Schedule& schedule, const QualityLadder& ladder,
                                    const ObjectiveWeights& weights);

enum class ViolationKind {
    UserCountMismatch,
    SegmentCountMismatch,
    SlotOutOfRange,
    QualityOutOfRange,
    CapacityOverrun,
};

[[nodiscard]] const char* toString(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    std::size_t user = 0;
    std::size_t slot = 0;
    std::size_t segment = 0;
    double magnitude = 0.0;  ///< MB over capacity, or the offending index

    [[nodiscard]] std::string describe() const;
};

struct ValidationResult {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

[[nodiscard]] ValidationResult validateSchedule(const Schedule& schedule, const Scenario& scenario,
                                                const QualityLadder& ladder);

/// Throws std::invalid_argument if the schedule fails validation.
[[nodiscard]] MetricsReport computeMetrics(const Schedule& schedule, const Scenario& scenario,
                                           const QualityLadder& ladder,
                                           const ObjectiveWeights& weights);

}  // namespace antsched
