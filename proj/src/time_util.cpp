#include "geotravel/time_util.hpp"

#include <array>
#include <cstdio>
#include <stdexcept>

namespace geotravel {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

int parse_fixed(std::string_view s, std::size_t pos, int width) {
  int v = 0;
  for (int i = 0; i < width; ++i) {
    char c = s[pos + static_cast<std::size_t>(i)];
    if (!is_digit(c)) throw std::invalid_argument("bad timestamp digit");
    v = v * 10 + (c - '0');
  }
  return v;
}

bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                       31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

}  // namespace

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t parse_rfc3339(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|±HH:MM)
  if (s.size() < 20) throw std::invalid_argument("timestamp too short");
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    throw std::invalid_argument("bad timestamp layout");

  int year = parse_fixed(s, 0, 4);
  int month = parse_fixed(s, 5, 2);
  int day = parse_fixed(s, 8, 2);
  int hour = parse_fixed(s, 11, 2);
  int minute = parse_fixed(s, 14, 2);
  int second = parse_fixed(s, 17, 2);

  if (month < 1 || month > 12) throw std::invalid_argument("bad month");
  if (day < 1 || day > static_cast<int>(days_in_month(year, static_cast<unsigned>(month))))
    throw std::invalid_argument("bad day");
  if (hour > 23 || minute > 59 || second > 59)
    throw std::invalid_argument("bad time of day");

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    if (pos >= s.size() || !is_digit(s[pos]))
      throw std::invalid_argument("bad fractional seconds");
    while (pos < s.size() && is_digit(s[pos])) ++pos;
  }

  if (pos >= s.size()) throw std::invalid_argument("missing timezone");
  std::int64_t offset_seconds = 0;
  char tz = s[pos];
  if (tz == 'Z' || tz == 'z') {
    ++pos;
  } else if (tz == '+' || tz == '-') {
    if (pos + 6 > s.size() || s[pos + 3] != ':')
      throw std::invalid_argument("bad timezone offset");
    int oh = parse_fixed(s, pos + 1, 2);
    int om = parse_fixed(s, pos + 4, 2);
    if (oh > 23 || om > 59) throw std::invalid_argument("bad timezone offset");
    offset_seconds = static_cast<std::int64_t>(oh) * 3600 + om * 60;
    if (tz == '-') offset_seconds = -offset_seconds;
    pos += 6;
  } else {
    throw std::invalid_argument("bad timezone");
  }
  if (pos != s.size()) throw std::invalid_argument("trailing characters in timestamp");

  std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                      static_cast<unsigned>(day));
  std::int64_t secs = days * 86400 + hour * 3600 + minute * 60 + second;
  return secs - offset_seconds;
}

std::string format_rfc3339(std::int64_t unix_seconds) {
  std::int64_t days = unix_seconds / 86400;
  std::int64_t rem = unix_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  // Inverse of days_from_civil.
  std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  const std::int64_t year = y + (m <= 2);

  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(year), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

int weekday_mon0(std::int64_t unix_seconds) {
  std::int64_t days = unix_seconds / 86400;
  if (unix_seconds % 86400 < 0) days -= 1;
  // 1970-01-01 was a Thursday (index 3 with Monday = 0).
  std::int64_t w = (days + 3) % 7;
  if (w < 0) w += 7;
  return static_cast<int>(w);
}

}  // namespace geotravel
