#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace geotravel {

/// Parses an RFC 3339 timestamp ("2017-03-12T08:00:00Z", fractional seconds
/// and numeric offsets accepted) into UTC unix seconds. Fractional seconds
/// are truncated. Throws std::invalid_argument on anything else.
std::int64_t parse_rfc3339(std::string_view s);

/// Formats unix seconds as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(std::int64_t unix_seconds);

/// Weekday of a UTC instant, 0 = Monday .. 6 = Sunday.
int weekday_mon0(std::int64_t unix_seconds);

/// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d);

}  // namespace geotravel
