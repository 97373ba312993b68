#include "antsched/hls.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "antsched/error.hpp"

namespace antsched::hls {

namespace {

constexpr std::string_view kHeader = "#EXTM3U";
constexpr std::string_view kVersion = "#EXT-X-VERSION:";
constexpr std::string_view kTargetDuration = "#EXT-X-TARGETDURATION:";
constexpr std::string_view kBufferSize = "#EXT-X-BUFFERSIZE:";
constexpr std::string_view kRefresh = "#EXT-X-REFRESH:";
constexpr std::string_view kExtInf = "#EXTINF:";
constexpr std::string_view kEndList = "#EXT-X-ENDLIST";
constexpr std::string_view kStreamInf = "#EXT-X-STREAM-INF:";

struct Line {
    std::string_view text;
    std::size_t number;
};

std::vector<Line> splitLines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    while (!text.empty()) {
        const auto end = text.find('\n');
        auto line = text.substr(0, end);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++number;
        lines.push_back({line, number});
        if (end == std::string_view::npos) break;
        text.remove_prefix(end + 1);
    }
    return lines;
}

bool isBlank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool startsWith(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

template <typename Int>
Int parseInteger(std::string_view value, const Line& line, std::string_view tag) {
    value = trim(value);
    Int out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty())
        throw ParseError("non-integer value for " + std::string(tag) + ": '" + std::string(value) + "'",
                         line.number);
    return out;
}

int parseNatural(std::string_view value, const Line& line, std::string_view tag) {
    const int v = parseInteger<int>(value, line, tag);
    if (v < 0) throw ParseError(std::string(tag) + " must be a natural number", line.number);
    return v;
}

double parseDuration(std::string_view value, const Line& line) {
    value = trim(value);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty() || out < 0.0)
        throw ParseError("bad #EXTINF duration '" + std::string(value) + "'", line.number);
    return out;
}

std::string formatDuration(double seconds) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, seconds);
    return {buf, ptr};
}

void requireHeader(const std::vector<Line>& lines) {
    for (const auto& line : lines) {
        if (isBlank(line.text)) continue;
        if (line.text != kHeader) throw ParseError("playlist must start with #EXTM3U", line.number);
        return;
    }
    throw ParseError("playlist must start with #EXTM3U");
}

/// BANDWIDTH from an attribute list, honouring quoted values.
std::optional<long long> bandwidthAttribute(std::string_view attributes, const Line& line) {
    std::size_t i = 0;
    while (i < attributes.size()) {
        const auto eq = attributes.find('=', i);
        if (eq == std::string_view::npos) break;
        const auto key = trim(attributes.substr(i, eq - i));
        std::size_t j = eq + 1;
        std::size_t valueEnd;
        if (j < attributes.size() && attributes[j] == '"') {
            const auto close = attributes.find('"', j + 1);
            if (close == std::string_view::npos) throw ParseError("unterminated quoted attribute", line.number);
            valueEnd = close + 1;
        } else {
            valueEnd = std::min(attributes.find(',', j), attributes.size());
        }
        if (key == "BANDWIDTH")
            return parseInteger<long long>(attributes.substr(j, valueEnd - j), line, "BANDWIDTH");
        i = valueEnd < attributes.size() ? valueEnd + 1 : valueEnd;
    }
    return std::nullopt;
}

}  // namespace

void MediaPlaylist::validate() const {
    if (endList && entries.empty()) throw ConfigError("an ended playlist needs at least one entry");
    if (targetDurationSeconds) {
        for (const auto& e : entries)
            if (std::lround(e.durationSeconds) > *targetDurationSeconds)
                throw ConfigError("entry '" + e.uri + "' is longer than the target duration");
    }
}

void MasterPlaylist::validate() const {
    if (variants.empty()) throw ConfigError("master playlist has no variants");
    std::set<long long> seen;
    for (const auto& v : variants) {
        if (v.bandwidthBps <= 0) throw ConfigError("variant BANDWIDTH must be positive");
        if (!seen.insert(v.bandwidthBps).second)
            throw ConfigError("duplicate BANDWIDTH " + std::to_string(v.bandwidthBps));
    }
}

std::vector<std::size_t> MasterPlaylist::levelOrder() const {
    std::vector<std::size_t> order(variants.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
        return variants[a].bandwidthBps < variants[b].bandwidthBps;
    });
    return order;
}

MediaPlaylist parseMediaPlaylist(std::string_view text) {
    const auto lines = splitLines(text);
    requireHeader(lines);

    MediaPlaylist playlist;
    std::vector<std::string> pending;  // unknown tags waiting for the next entry
    std::optional<MediaEntry> open;    // #EXTINF seen, URI not yet
    std::size_t openLine = 0;
    bool headerDone = false;

    for (const auto& line : lines) {
        const auto s = line.text;
        if (isBlank(s) || s == kHeader) continue;
        if (s.front() != '#') {
            if (!open) throw ParseError("URI without preceding #EXTINF", line.number);
            open->uri = std::string(trim(s));
            open->uriTags = std::move(pending);
            pending.clear();
            playlist.entries.push_back(std::move(*open));
            open.reset();
            continue;
        }
        if (startsWith(s, kExtInf)) {
            if (open) throw ParseError("#EXTINF with no following URI", openLine);
            auto body = s.substr(kExtInf.size());
            const auto comma = body.find(',');
            MediaEntry entry;
            entry.durationSeconds = parseDuration(body.substr(0, comma), line);
            if (comma != std::string_view::npos) entry.title = std::string(body.substr(comma + 1));
            openLine = line.number;
            // tags before the first #EXTINF belong to the header
            (headerDone ? entry.leadingTags : playlist.headerTags) = std::move(pending);
            pending.clear();
            headerDone = true;
            open = std::move(entry);
        } else if (startsWith(s, kVersion)) {
            playlist.version = parseInteger<int>(s.substr(kVersion.size()), line, "#EXT-X-VERSION");
        } else if (startsWith(s, kTargetDuration)) {
            playlist.targetDurationSeconds = parseNatural(s.substr(kTargetDuration.size()), line, "#EXT-X-TARGETDURATION");
        } else if (startsWith(s, kBufferSize)) {
            playlist.bufferSize = parseNatural(s.substr(kBufferSize.size()), line, "#EXT-X-BUFFERSIZE");
        } else if (startsWith(s, kRefresh)) {
            playlist.refreshSeconds = parseNatural(s.substr(kRefresh.size()), line, "#EXT-X-REFRESH");
        } else if (s == kEndList) {
            playlist.endList = true;
        } else {
            pending.emplace_back(s);
        }
    }
    if (open) throw ParseError("#EXTINF with no following URI", openLine);
    if (headerDone)
        playlist.trailingTags = std::move(pending);
    else
        playlist.headerTags = std::move(pending);

    try {
        playlist.validate();
    } catch (const ConfigError& e) {
        throw ParseError(e.what());
    }
    return playlist;
}

MasterPlaylist parseMasterPlaylist(std::string_view text) {
    const auto lines = splitLines(text);
    requireHeader(lines);

    MasterPlaylist master;
    std::optional<Variant> open;
    std::size_t openLine = 0;
    for (const auto& line : lines) {
        const auto s = line.text;
        if (isBlank(s) || s == kHeader) continue;
        if (startsWith(s, kStreamInf)) {
            if (open) throw ParseError("#EXT-X-STREAM-INF with no URI", openLine);
            Variant v;
            v.attributes = std::string(s.substr(kStreamInf.size()));
            const auto bw = bandwidthAttribute(v.attributes, line);
            if (!bw) throw ParseError("#EXT-X-STREAM-INF without BANDWIDTH", line.number);
            v.bandwidthBps = *bw;
            open = std::move(v);
            openLine = line.number;
        } else if (s.front() == '#') {
            master.headerTags.emplace_back(s);
        } else {
            if (!open) throw ParseError("URI without preceding #EXT-X-STREAM-INF", line.number);
            open->uri = std::string(trim(s));
            master.variants.push_back(std::move(*open));
            open.reset();
        }
    }
    if (open) throw ParseError("#EXT-X-STREAM-INF with no URI", openLine);
    try {
        master.validate();
    } catch (const ConfigError& e) {
        throw ParseError(e.what());
    }
    return master;
}

std::string emitMediaPlaylist(const MediaPlaylist& p) {
    std::string out;
    auto line = [&out](std::string_view a, std::string_view b = {}) {
        out.append(a).append(b).push_back('\n');
    };
    line(kHeader);
    if (p.version) line(kVersion, std::to_string(*p.version));
    if (p.targetDurationSeconds) line(kTargetDuration, std::to_string(*p.targetDurationSeconds));
    if (p.bufferSize) line(kBufferSize, std::to_string(*p.bufferSize));
    if (p.refreshSeconds) line(kRefresh, std::to_string(*p.refreshSeconds));
    for (const auto& tag : p.headerTags) line(tag);
    for (const auto& e : p.entries) {
        for (const auto& tag : e.leadingTags) line(tag);
        line(kExtInf, formatDuration(e.durationSeconds) + "," + e.title);
        for (const auto& tag : e.uriTags) line(tag);
        line(e.uri);
    }
    for (const auto& tag : p.trailingTags) line(tag);
    if (p.endList) line(kEndList);
    return out;
}

std::string emitMasterPlaylist(const MasterPlaylist& p) {
    std::string out(kHeader);
    out.push_back('\n');
    for (const auto& tag : p.headerTags) out.append(tag).push_back('\n');
    for (const auto& v : p.variants) {
        out.append(kStreamInf).append(v.attributes).push_back('\n');
        out.append(v.uri).push_back('\n');
    }
    return out;
}

int bufferSizeForSlot(const Schedule& schedule, std::size_t user, std::size_t slot) {
    if (user >= schedule.users.size()) throw DomainError("user index out of range");
    if (slot >= schedule.numSlots)
        throw DomainError("slot " + std::to_string(slot) + " beyond horizon of " + std::to_string(schedule.numSlots));
    return static_cast<int>(bufferTimeline(schedule, user)[slot]);
}

MediaPlaylist joinPlaylists(const MasterPlaylist& master, const std::map<std::string, MediaPlaylist>& variantPlaylists,
                            const Schedule& schedule, std::size_t user, std::size_t currentSlot, int refreshSeconds) {
    master.validate();
    if (refreshSeconds < 0) throw DomainError("refresh must be a natural number");
    if (user >= schedule.users.size()) throw DomainError("user index out of range");

    const auto order = master.levelOrder();
    std::vector<const MediaPlaylist*> byLevel;
    for (auto idx : order) {
        const auto it = variantPlaylists.find(master.variants[idx].uri);
        if (it == variantPlaylists.end())
            throw ConsistencyError("no media playlist for variant " + master.variants[idx].uri);
        byLevel.push_back(&it->second);
    }

    const auto& first = *byLevel.front();
    for (const auto* p : byLevel) {
        if (p->entries.size() != first.entries.size())
            throw ConsistencyError("variant playlists have different entry counts");
        for (std::size_t i = 0; i < first.entries.size(); ++i)
            if (p->entries[i].durationSeconds != first.entries[i].durationSeconds)
                throw ConsistencyError("variant playlists disagree on the duration of entry " + std::to_string(i + 1));
    }
    const auto& segments = schedule.users[user].segments;
    if (segments.size() != first.entries.size())
        throw ConsistencyError("schedule has " + std::to_string(segments.size()) + " segments but the playlists have " +
                               std::to_string(first.entries.size()) + " entries");

    MediaPlaylist joined;
    joined.version = first.version;
    joined.targetDurationSeconds = first.targetDurationSeconds;
    joined.bufferSize = bufferSizeForSlot(schedule, user, currentSlot);
    joined.refreshSeconds = refreshSeconds;
    joined.headerTags = first.headerTags;
    joined.endList = std::all_of(byLevel.begin(), byLevel.end(), [](const MediaPlaylist* p) { return p->endList; });
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto level = segments[i].quality;
        if (level >= byLevel.size())
            throw ConsistencyError("segment " + std::to_string(i + 1) + " uses quality " + std::to_string(level) +
                                   " but the master lists " + std::to_string(byLevel.size()) + " variants");
        joined.entries.push_back(byLevel[level]->entries[i]);
    }
    return joined;
}

}  // namespace antsched::hls
