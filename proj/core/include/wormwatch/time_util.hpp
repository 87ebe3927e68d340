#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wormwatch {

/// Seconds since the Unix epoch, UTC.
using EpochSeconds = std::int64_t;

inline constexpr EpochSeconds kMinute = 60;

constexpr bool is_minute_aligned(EpochSeconds t) noexcept { return t % kMinute == 0; }

/// Floor to the start of the containing minute (t >= 0).
constexpr EpochSeconds floor_minute(EpochSeconds t) noexcept { return t - t % kMinute; }

/// Parses `YYYY-MM-DDTHH:MM:SSZ`. Returns nullopt on any syntax or calendar error.
std::optional<EpochSeconds> parse_iso_utc(std::string_view text);

/// Parses `YYYY-MM-DDTHH:MM:00Z`; a non-zero seconds field is rejected.
std::optional<EpochSeconds> parse_iso_minute(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso_utc(EpochSeconds t);

}  // namespace wormwatch
