#include "antsched/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "antsched/error.hpp"

namespace antsched::channel {

namespace {

double dbmToMilliwatt(double dbm) { return std::pow(10.0, dbm / 10.0); }

constexpr std::size_t kNoStation = std::numeric_limits<std::size_t>::max();

}  // namespace

void RadioParams::validate() const {
    if (!(bandwidthHz > 0.0)) throw ConfigError("bandwidthHz must be positive");
    if (!(cellCapMbps > 0.0)) throw ConfigError("cellCapMbps must be positive");
}

void ScenarioConfig::validate() const {
    if (numBaseStations == 0) throw ConfigError("numBaseStations must be positive");
    if (numUsers == 0) throw ConfigError("numUsers must be positive");
    if (!(interSiteDistanceM > 0.0)) throw ConfigError("interSiteDistanceM must be positive");
    if (!(slotSeconds > 0.0)) throw ConfigError("slotSeconds must be positive");
    if (shadowingSigmaDb < 0.0) throw ConfigError("shadowingSigmaDb must be non-negative");
    if (2 * protectedEdgeCount > numBaseStations ||
        numRemoved > numBaseStations - 2 * protectedEdgeCount)
        throw ConfigError("numRemoved exceeds the removable interior stations (" +
                          std::to_string(numBaseStations > 2 * protectedEdgeCount
                                             ? numBaseStations - 2 * protectedEdgeCount
                                             : 0) +
                          ")");
    if (segmentCount == 0 || segmentCount > numBaseStations)
        throw ConfigError("segmentCount must be in [1, numBaseStations]");
}

double pathLossDb(double distanceKm, double shadowingDb) {
    if (!(distanceKm > 0.0)) throw DomainError("path loss needs a positive distance");
    return 128.1 + 37.6 * std::log10(distanceKm) + shadowingDb;
}

double shannonRateMbps(const RadioParams& params, double pathLossDb) {
    if (std::isinf(pathLossDb) && pathLossDb > 0) return 0.0;
    const double bandwidthDb = 10.0 * std::log10(params.bandwidthHz);
    const double rxDbm = params.txPowerDbm + params.antennaGainDb - pathLossDb;
    const double floorMw = dbmToMilliwatt(params.noisePsdDbmHz + bandwidthDb) +
                           dbmToMilliwatt(params.interferencePsdDbmHz + bandwidthDb);
    const double sinr = dbmToMilliwatt(rxDbm) / floorMw;
    const double rate = params.bandwidthHz * std::log2(1.0 + sinr) / 1e6;
    return std::clamp(rate, 0.0, params.cellCapMbps);
}

std::vector<double> allocateProportionalFair(std::span<const double> phyRatesMbps,
                                             double cellCapMbps) {
    std::vector<double> share(phyRatesMbps.begin(), phyRatesMbps.end());
    if (share.empty()) return share;
    const auto n = static_cast<double>(share.size());
    for (auto& r : share) {
        if (r < 0.0) throw DomainError("rates must be non-negative");
        r /= n;
    }
    const double sum = std::accumulate(share.begin(), share.end(), 0.0);
    if (sum > cellCapMbps) {
        const double scale = cellCapMbps / sum;
        for (auto& r : share) r *= scale;
    }
    return share;
}

ScenarioBuild buildScenario(const ScenarioConfig& config, const RadioParams& params) {
    config.validate();
    params.validate();

    std::mt19937_64 rng(config.rngSeed);

    const std::size_t stations = config.numBaseStations;
    std::vector<std::size_t> interior;
    for (std::size_t i = config.protectedEdgeCount; i + config.protectedEdgeCount < stations; ++i)
        interior.push_back(i);
    std::shuffle(interior.begin(), interior.end(), rng);
    std::vector<std::size_t> removed(interior.begin(),
                                     interior.begin() + static_cast<std::ptrdiff_t>(config.numRemoved));
    std::sort(removed.begin(), removed.end());

    std::vector<bool> active(stations, true);
    for (auto r : removed) active[r] = false;

    std::normal_distribution<double> shadowing(0.0, config.shadowingSigmaDb > 0.0 ? config.shadowingSigmaDb : 1.0);

    const std::size_t slots = stations;
    const std::size_t users = config.numUsers;
    std::vector<std::vector<double>> capacity(users, std::vector<double>(slots, 0.0));
    std::vector<std::size_t> serving(slots, kNoStation);
    std::vector<double> phy(users);

    for (std::size_t t = 0; t < slots; ++t) {
        // group position at slot t coincides with station t
        std::size_t best = kNoStation;
        std::size_t bestGap = 0;
        for (std::size_t b = 0; b < stations; ++b) {
            if (!active[b]) continue;
            const std::size_t gap = b > t ? b - t : t - b;
            if (best == kNoStation || gap < bestGap) {
                best = b;
                bestGap = gap;
            }
        }
        serving[t] = best;

        const double distanceKm =
            std::max(static_cast<double>(bestGap) * config.interSiteDistanceM / 1000.0, kMinDistanceKm);
        for (std::size_t u = 0; u < users; ++u) {
            const double shadow = config.shadowingSigmaDb > 0.0 ? shadowing(rng) : 0.0;
            phy[u] = best == kNoStation ? 0.0 : shannonRateMbps(params, pathLossDb(distanceKm, shadow));
        }
        const auto alloc = allocateProportionalFair(phy, params.cellCapMbps);
        for (std::size_t u = 0; u < users; ++u)
            capacity[u][t] = alloc[u] * config.slotSeconds / 8.0;
    }

    return {Scenario(config.segmentCount, config.slotSeconds, std::move(capacity)), std::move(removed),
            std::move(serving)};
}

}  // namespace antsched::channel
