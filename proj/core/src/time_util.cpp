#include "wormwatch/time_util.hpp"

#include <chrono>
#include <cstdio>

namespace wormwatch {

namespace {

bool read_digits(std::string_view text, std::size_t pos, std::size_t count, int& out) {
  if (pos + count > text.size()) return false;
  int value = 0;
  for (std::size_t i = 0; i < count; ++i) {
    char c = text[pos + i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

}  // namespace

std::optional<EpochSeconds> parse_iso_utc(std::string_view text) {
  // 0123456789012345678901
  // YYYY-MM-DDTHH:MM:SSZ
  if (text.size() != 20) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z')
    return std::nullopt;

  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!read_digits(text, 0, 4, y) || !read_digits(text, 5, 2, mo) ||
      !read_digits(text, 8, 2, d) || !read_digits(text, 11, 2, h) ||
      !read_digits(text, 14, 2, mi) || !read_digits(text, 17, 2, s))
    return std::nullopt;
  if (h > 23 || mi > 59 || s > 59) return std::nullopt;

  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  return static_cast<EpochSeconds>(days_since_epoch) * 86400 + h * 3600 + mi * 60 + s;
}

std::optional<EpochSeconds> parse_iso_minute(std::string_view text) {
  auto t = parse_iso_utc(text);
  if (!t || !is_minute_aligned(*t)) return std::nullopt;
  return t;
}

std::string format_iso_utc(EpochSeconds t) {
  using namespace std::chrono;
  EpochSeconds days = t / 86400;
  EpochSeconds rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                static_cast<int>(rem % 60));
  return buf;
}

}  // namespace wormwatch
