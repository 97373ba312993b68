#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "antsched/core.hpp"

namespace antsched::channel {

/// Link-budget parameters (LTE macro cell, 10 MHz).
struct RadioParams {
    double bandwidthHz = 1.0e7;
    double txPowerDbm = 46.0;
    double antennaGainDb = 0.0;
    double noisePsdDbmHz = -174.0;
    double interferencePsdDbmHz = -149.0;
    double cellCapMbps = 30.0;

    void validate() const;
};

/// Line-of-stations scenario; users move together, one inter-site distance per slot.
struct ScenarioConfig {
    std::size_t numBaseStations = 44;
    double interSiteDistanceM = 1500.0;
    std::size_t numUsers = 4;
    std::size_t numRemoved = 0;
    std::size_t protectedEdgeCount = 2;
    double shadowingSigmaDb = 10.0;
    double slotSeconds = 10.0;
    std::size_t segmentCount = 44;
    std::uint64_t rngSeed = 0;

    void validate() const;
};

/// Users closer than this are treated as being at this distance.
inline constexpr double kMinDistanceKm = 0.035;

/// Path loss "no serving station".
inline constexpr double kNoCoverage = std::numeric_limits<double>::infinity();

/// 128.1 + 37.6 log10(d_km) + shadowing. Throws DomainError for d <= 0.
[[nodiscard]] double pathLossDb(double distanceKm, double shadowingDb);

/// Shannon rate over the noise-plus-interference floor, clamped to [0, cellCapMbps].
[[nodiscard]] double shannonRateMbps(const RadioParams& params, double pathLossDb);

/// Equal time share (rate / n) scaled down to the cell cap when the sum exceeds it.
[[nodiscard]] std::vector<double> allocateProportionalFair(std::span<const double> phyRatesMbps,
                                                           double cellCapMbps);

struct ScenarioBuild {
    Scenario scenario;
    std::vector<std::size_t> removedStations;  ///< sorted station indices
    std::vector<std::size_t> servingStation;   ///< per slot
};

/// Deterministic given config.rngSeed. Throws ConfigError on invalid config.
[[nodiscard]] ScenarioBuild buildScenario(const ScenarioConfig& config, const RadioParams& params);

}  // namespace antsched::channel
