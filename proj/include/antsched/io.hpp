#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "antsched/channel.hpp"
#include "antsched/core.hpp"

namespace antsched::io {

// CSV files use 1-based slot and segment numbers; users are 0-based.

/// `user,slot,capacity_mb`, one row per (user, slot), six decimals.
[[nodiscard]] std::string writeScenarioCsv(const Scenario& scenario);

/// numSegments defaults to the number of slots found.
[[nodiscard]] Scenario readScenarioCsv(std::string_view text, std::optional<std::size_t> numSegments = {},
                                       double slotSeconds = 10.0);

/// `user,segment,slot,quality_index,quality_mb`, sorted by (user, segment). Deferred
/// segments carry `deferred` in the slot column.
[[nodiscard]] std::string writeScheduleCsv(const Schedule& schedule, const QualityLadder& ladder);

[[nodiscard]] Schedule readScheduleCsv(std::string_view text, std::size_t numSlots);

/// "1.77,3.69,4.51" or "1.77:1000000,3.69:1500000,...": sizes in MB, optional bandwidth in bit/s.
[[nodiscard]] QualityLadder parseLadderSpec(std::string_view spec);

/// "440,10,1" -> lateness, quality, buffer.
[[nodiscard]] ObjectiveWeights parseWeightsSpec(std::string_view spec);

/// Flat `key=value` text; `#` starts a comment, lists are comma-separated.
class KeyValueConfig {
public:
    [[nodiscard]] static KeyValueConfig parse(std::string_view text);

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
    [[nodiscard]] std::optional<std::string> get(const std::string& key) const;

    [[nodiscard]] std::optional<double> getDouble(const std::string& key) const;
    [[nodiscard]] std::optional<std::uint64_t> getUnsigned(const std::string& key) const;
    [[nodiscard]] std::optional<std::vector<std::string>> getList(const std::string& key) const;
    [[nodiscard]] std::optional<std::vector<std::uint64_t>> getUnsignedList(const std::string& key) const;

    /// Throws ParseError naming the first key not in `known` and its line.
    void requireKnownKeys(const std::vector<std::string_view>& known) const;

    [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::size_t> lines_;
};

/// Keys are the field names of ScenarioConfig / RadioParams.
void applyScenarioConfig(const KeyValueConfig& config, channel::ScenarioConfig& scenario);
void applyRadioParams(const KeyValueConfig& config, channel::RadioParams& radio);

[[nodiscard]] std::vector<std::string_view> scenarioConfigKeys();
[[nodiscard]] std::vector<std::string_view> radioParamKeys();

/// Splits on commas and trims blanks.
[[nodiscard]] std::vector<std::string> splitList(std::string_view text);

[[nodiscard]] std::string formatFixed(double value, int decimals);

}  // namespace antsched::io
