#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mobmotif {

/// Seconds since 1970-01-01T00:00:00 on the UTC (or, after shifting, local)
/// timeline.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86'400;

/// Accepts `YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+HH:MM|-HH:MM]`; a missing zone
/// designator means UTC. Returns nullopt for anything else.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SSZ`, or without the `Z` when `utc` is false.
std::string format_iso8601(Timestamp t, bool utc = true);

std::chrono::sys_days day_of(Timestamp t);

/// Seconds elapsed since the start of the day containing t.
inline std::int64_t seconds_of_day(Timestamp t) {
  const std::int64_t r = t % kSecondsPerDay;
  return r < 0 ? r + kSecondsPerDay : r;
}

std::string format_date(std::chrono::sys_days day);

bool is_weekday(std::chrono::sys_days day);

}  // namespace mobmotif
