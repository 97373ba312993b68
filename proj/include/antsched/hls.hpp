#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "antsched/core.hpp"

namespace antsched::hls {

struct MediaEntry {
    double durationSeconds = 0.0;
    std::string title;                     ///< text after the comma of #EXTINF
    std::string uri;
    std::vector<std::string> leadingTags;  ///< unrecognized tags in front of this #EXTINF
    std::vector<std::string> uriTags;      ///< unrecognized tags between #EXTINF and the URI

    friend bool operator==(const MediaEntry&, const MediaEntry&) = default;
};

/// Media (single-variant) playlist with the BUFFERSIZE / REFRESH extension tags.
struct MediaPlaylist {
    std::optional<int> version;
    std::optional<int> targetDurationSeconds;
    std::optional<int> bufferSize;      ///< #EXT-X-BUFFERSIZE, segments
    std::optional<int> refreshSeconds;  ///< #EXT-X-REFRESH, seconds
    std::vector<std::string> headerTags;   ///< unrecognized tags before the first entry
    std::vector<MediaEntry> entries;
    std::vector<std::string> trailingTags; ///< unrecognized tags after the last entry
    bool endList = false;

    /// Throws ConfigError when an entry exceeds the target duration or an ended list is empty.
    void validate() const;

    friend bool operator==(const MediaPlaylist&, const MediaPlaylist&) = default;
};

struct Variant {
    long long bandwidthBps = 0;
    std::string attributes;  ///< raw attribute list after "#EXT-X-STREAM-INF:"
    std::string uri;

    friend bool operator==(const Variant&, const Variant&) = default;
};

struct MasterPlaylist {
    std::vector<std::string> headerTags;
    std::vector<Variant> variants;

    void validate() const;

    /// Variant indices ordered by ascending bandwidth: element i serves ladder level i.
    [[nodiscard]] std::vector<std::size_t> levelOrder() const;

    friend bool operator==(const MasterPlaylist&, const MasterPlaylist&) = default;
};

/// Accepts LF or CRLF; "#EXT-X-BUFFERSIZE: 2" (space after colon) is tolerated.
[[nodiscard]] MediaPlaylist parseMediaPlaylist(std::string_view text);
[[nodiscard]] MasterPlaylist parseMasterPlaylist(std::string_view text);

/// Canonical text, LF line endings, extension tags unspaced.
[[nodiscard]] std::string emitMediaPlaylist(const MediaPlaylist& playlist);
[[nodiscard]] std::string emitMasterPlaylist(const MasterPlaylist& playlist);

/// Buffer the player should hold at the end of `slot` under the schedule.
[[nodiscard]] int bufferSizeForSlot(const Schedule& schedule, std::size_t user, std::size_t slot);

/// Builds the single-variant playlist a controller returns to one player: entry i comes from
/// the variant serving the scheduled quality of segment i. Variant playlists are keyed by the
/// URI listed in the master playlist.
[[nodiscard]] MediaPlaylist joinPlaylists(const MasterPlaylist& master,
                                          const std::map<std::string, MediaPlaylist>& variantPlaylists,
                                          const Schedule& schedule, std::size_t user, std::size_t currentSlot,
                                          int refreshSeconds);

}  // namespace antsched::hls
