#include "antsched/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "antsched/error.hpp"

namespace antsched::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename T>
std::optional<T> parseNumber(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    T out{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return out;
}

template <typename T>
T requireNumber(std::string_view s, std::string_view what, std::size_t line) {
    const auto v = parseNumber<T>(s);
    if (!v) throw ParseError("bad " + std::string(what) + " '" + std::string(trim(s)) + "'", line);
    return *v;
}

/// Non-empty, non-comment lines with their 1-based numbers.
std::vector<std::pair<std::string_view, std::size_t>> contentLines(std::string_view text) {
    std::vector<std::pair<std::string_view, std::size_t>> out;
    std::size_t number = 0;
    while (!text.empty()) {
        const auto end = text.find('\n');
        auto line = text.substr(0, end);
        ++number;
        line = trim(line);
        if (!line.empty()) out.emplace_back(line, number);
        if (end == std::string_view::npos) break;
        text.remove_prefix(end + 1);
    }
    return out;
}

std::vector<std::string_view> splitFields(std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
        const auto comma = line.find(',');
        fields.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return fields;
}

void expectHeader(const std::vector<std::pair<std::string_view, std::size_t>>& lines, std::string_view header) {
    if (lines.empty()) throw ParseError("empty CSV input");
    auto first = splitFields(lines.front().first);
    auto want = splitFields(header);
    if (first != want)
        throw ParseError("expected header '" + std::string(header) + "'", lines.front().second);
}

}  // namespace

std::string formatFixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

std::vector<std::string> splitList(std::string_view text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    for (auto f : splitFields(text)) out.emplace_back(f);
    return out;
}

// -------------------------------------------------------------------- scenarios

std::string writeScenarioCsv(const Scenario& scenario) {
    std::string out = "user,slot,capacity_mb\n";
    for (std::size_t u = 0; u < scenario.numUsers(); ++u)
        for (std::size_t t = 0; t < scenario.numSlots(); ++t)
            out += std::to_string(u) + "," + std::to_string(t + 1) + "," + formatFixed(scenario.capacity(u, t), 6) + "\n";
    return out;
}

Scenario readScenarioCsv(std::string_view text, std::optional<std::size_t> numSegments, double slotSeconds) {
    const auto lines = contentLines(text);
    expectHeader(lines, "user,slot,capacity_mb");

    std::map<std::pair<std::size_t, std::size_t>, double> cells;
    std::size_t users = 0;
    std::size_t slots = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [line, number] = lines[i];
        const auto f = splitFields(line);
        if (f.size() != 3) throw ParseError("expected 3 fields", number);
        const auto u = requireNumber<std::size_t>(f[0], "user", number);
        const auto t = requireNumber<std::size_t>(f[1], "slot", number);
        const auto c = requireNumber<double>(f[2], "capacity", number);
        if (t == 0) throw ParseError("slots are numbered from 1", number);
        if (!std::isfinite(c) || c < 0.0) throw ParseError("capacity must be finite and non-negative", number);
        if (!cells.emplace(std::make_pair(u, t - 1), c).second)
            throw ParseError("duplicate row for user " + std::to_string(u) + " slot " + std::to_string(t), number);
        users = std::max(users, u + 1);
        slots = std::max(slots, t);
    }
    if (cells.size() != users * slots || users == 0)
        throw ParseError("scenario CSV must contain every (user, slot) pair exactly once");

    std::vector<std::vector<double>> capacity(users, std::vector<double>(slots, 0.0));
    for (const auto& [key, c] : cells) capacity[key.first][key.second] = c;
    try {
        return Scenario(numSegments.value_or(slots), slotSeconds, std::move(capacity));
    } catch (const ConfigError& e) {
        throw ParseError(e.what());
    }
}

// -------------------------------------------------------------------- schedules

std::string writeScheduleCsv(const Schedule& schedule, const QualityLadder& ladder) {
    std::string out = "user,segment,slot,quality_index,quality_mb\n";
    for (std::size_t u = 0; u < schedule.users.size(); ++u) {
        const auto& segs = schedule.users[u].segments;
        for (std::size_t s = 0; s < segs.size(); ++s) {
            const auto& a = segs[s];
            out += std::to_string(u) + "," + std::to_string(s + 1) + ",";
            out += a.slot ? std::to_string(*a.slot + 1) : std::string("deferred");
            out += "," + std::to_string(a.quality) + "," + formatFixed(ladder.sizeOf(a.quality), 6) + "\n";
        }
    }
    return out;
}

Schedule readScheduleCsv(std::string_view text, std::size_t numSlots) {
    const auto lines = contentLines(text);
    expectHeader(lines, "user,segment,slot,quality_index,quality_mb");

    std::map<std::pair<std::size_t, std::size_t>, Assignment> cells;
    std::size_t users = 0;
    std::map<std::size_t, std::size_t> segmentsPerUser;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [line, number] = lines[i];
        const auto f = splitFields(line);
        if (f.size() != 5) throw ParseError("expected 5 fields", number);
        const auto u = requireNumber<std::size_t>(f[0], "user", number);
        const auto s = requireNumber<std::size_t>(f[1], "segment", number);
        if (s == 0) throw ParseError("segments are numbered from 1", number);
        Assignment a;
        if (f[2] != "deferred") {
            const auto t = requireNumber<std::size_t>(f[2], "slot", number);
            if (t == 0) throw ParseError("slots are numbered from 1", number);
            a.slot = t - 1;
        }
        a.quality = requireNumber<std::size_t>(f[3], "quality index", number);
        requireNumber<double>(f[4], "quality size", number);
        if (!cells.emplace(std::make_pair(u, s - 1), a).second)
            throw ParseError("duplicate row for user " + std::to_string(u) + " segment " + std::to_string(s), number);
        users = std::max(users, u + 1);
        auto& count = segmentsPerUser[u];
        count = std::max(count, s);
    }
    if (users == 0) throw ParseError("schedule CSV has no rows");

    Schedule schedule;
    schedule.numSlots = numSlots;
    schedule.users.resize(users);
    for (std::size_t u = 0; u < users; ++u) {
        const auto n = segmentsPerUser[u];
        for (std::size_t s = 0; s < n; ++s) {
            const auto it = cells.find({u, s});
            if (it == cells.end())
                throw ParseError("missing row for user " + std::to_string(u) + " segment " + std::to_string(s + 1));
            schedule.users[u].segments.push_back(it->second);
        }
    }
    return schedule;
}

// ------------------------------------------------------------------------ specs

QualityLadder parseLadderSpec(std::string_view spec) {
    std::vector<double> sizes;
    std::vector<std::optional<long long>> bandwidths;
    for (const auto& item : splitList(spec)) {
        const auto colon = item.find(':');
        const auto size = parseNumber<double>(std::string_view(item).substr(0, colon));
        if (!size) throw ParseError("bad ladder size '" + item + "'");
        sizes.push_back(*size);
        if (colon == std::string::npos) {
            bandwidths.emplace_back();
        } else {
            const auto bw = parseNumber<long long>(std::string_view(item).substr(colon + 1));
            if (!bw) throw ParseError("bad ladder bandwidth '" + item + "'");
            bandwidths.emplace_back(*bw);
        }
    }
    if (sizes.empty()) throw ParseError("empty ladder");
    const bool allGiven = std::all_of(bandwidths.begin(), bandwidths.end(), [](auto& b) { return b.has_value(); });
    const bool noneGiven = std::none_of(bandwidths.begin(), bandwidths.end(), [](auto& b) { return b.has_value(); });
    if (!allGiven && !noneGiven) throw ParseError("give a bandwidth for every ladder level or for none");
    try {
        auto levels = noneGiven ? QualityLadder::fromSizes(sizes).levels() : std::vector<QualityLevel>{};
        if (allGiven)
            for (std::size_t i = 0; i < sizes.size(); ++i) levels.push_back({sizes[i], *bandwidths[i], ""});
        // three-level ladders carry the conventional variant names
        static constexpr const char* kLabels[] = {"low", "med", "high"};
        for (std::size_t i = 0; i < levels.size(); ++i)
            levels[i].variantLabel = levels.size() == 3 ? kLabels[i] : "q" + std::to_string(i);
        return QualityLadder(std::move(levels));
    } catch (const ConfigError& e) {
        throw ParseError(e.what());
    }
}

ObjectiveWeights parseWeightsSpec(std::string_view spec) {
    const auto items = splitList(spec);
    if (items.size() != 3) throw ParseError("weights need three values: lateness,quality,buffer");
    ObjectiveWeights w;
    double* fields[] = {&w.lateness, &w.quality, &w.buffer};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto v = parseNumber<double>(items[i]);
        if (!v) throw ParseError("bad weight '" + items[i] + "'");
        *fields[i] = *v;
    }
    try {
        w.validate();
    } catch (const ConfigError& e) {
        throw ParseError(e.what());
    }
    return w;
}

// ----------------------------------------------------------------------- config

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig config;
    std::size_t number = 0;
    while (!text.empty()) {
        const auto end = text.find('\n');
        auto line = text.substr(0, end);
        ++number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected key=value", number);
            const auto key = std::string(trim(line.substr(0, eq)));
            if (key.empty()) throw ParseError("empty key", number);
            if (!config.values_.emplace(key, std::string(trim(line.substr(eq + 1)))).second)
                throw ParseError("duplicate key '" + key + "'", number);
            config.lines_[key] = number;
        }
        if (end == std::string_view::npos) break;
        text.remove_prefix(end + 1);
    }
    return config;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> KeyValueConfig::getDouble(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    const auto d = parseNumber<double>(*v);
    if (!d) throw ParseError("'" + key + "' expects a number, got '" + *v + "'", lines_.at(key));
    return d;
}

std::optional<std::uint64_t> KeyValueConfig::getUnsigned(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    const auto d = parseNumber<std::uint64_t>(*v);
    if (!d) throw ParseError("'" + key + "' expects a non-negative integer, got '" + *v + "'", lines_.at(key));
    return d;
}

std::optional<std::vector<std::string>> KeyValueConfig::getList(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    return splitList(*v);
}

std::optional<std::vector<std::uint64_t>> KeyValueConfig::getUnsignedList(const std::string& key) const {
    const auto items = getList(key);
    if (!items) return std::nullopt;
    std::vector<std::uint64_t> out;
    for (const auto& item : *items) {
        const auto d = parseNumber<std::uint64_t>(item);
        if (!d) throw ParseError("'" + key + "' expects non-negative integers, got '" + item + "'", lines_.at(key));
        out.push_back(*d);
    }
    return out;
}

void KeyValueConfig::requireKnownKeys(const std::vector<std::string_view>& known) const {
    for (const auto& [key, value] : values_)
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ParseError("unknown configuration key '" + key + "'", lines_.at(key));
}

std::vector<std::string_view> scenarioConfigKeys() {
    return {"numBaseStations", "interSiteDistanceM", "numUsers",    "numRemoved", "protectedEdgeCount",
            "shadowingSigmaDb", "slotSeconds",       "segmentCount", "rngSeed"};
}

std::vector<std::string_view> radioParamKeys() {
    return {"bandwidthHz", "txPowerDbm", "antennaGainDb", "noisePsdDbmHz", "interferencePsdDbmHz", "cellCapMbps"};
}

void applyScenarioConfig(const KeyValueConfig& c, channel::ScenarioConfig& s) {
    if (auto v = c.getUnsigned("numBaseStations")) {
        s.numBaseStations = *v;
        if (!c.has("segmentCount")) s.segmentCount = *v;
    }
    if (auto v = c.getDouble("interSiteDistanceM")) s.interSiteDistanceM = *v;
    if (auto v = c.getUnsigned("numUsers")) s.numUsers = *v;
    if (auto v = c.getUnsigned("numRemoved")) s.numRemoved = *v;
    if (auto v = c.getUnsigned("protectedEdgeCount")) s.protectedEdgeCount = *v;
    if (auto v = c.getDouble("shadowingSigmaDb")) s.shadowingSigmaDb = *v;
    if (auto v = c.getDouble("slotSeconds")) s.slotSeconds = *v;
    if (auto v = c.getUnsigned("segmentCount")) s.segmentCount = *v;
    if (auto v = c.getUnsigned("rngSeed")) s.rngSeed = *v;
}

void applyRadioParams(const KeyValueConfig& c, channel::RadioParams& r) {
    if (auto v = c.getDouble("bandwidthHz")) r.bandwidthHz = *v;
    if (auto v = c.getDouble("txPowerDbm")) r.txPowerDbm = *v;
    if (auto v = c.getDouble("antennaGainDb")) r.antennaGainDb = *v;
    if (auto v = c.getDouble("noisePsdDbmHz")) r.noisePsdDbmHz = *v;
    if (auto v = c.getDouble("interferencePsdDbmHz")) r.interferencePsdDbmHz = *v;
    if (auto v = c.getDouble("cellCapMbps")) r.cellCapMbps = *v;
}

}  // namespace antsched::io
