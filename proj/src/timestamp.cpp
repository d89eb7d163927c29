#include "stlf/timestamp.hpp"

#include <charconv>
#include <cstdio>

#include "stlf/error.hpp"

namespace stlf {

namespace {

using namespace std::chrono;

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error("malformed timestamp '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw Error("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
  const Date d{year{parse_int(text.substr(0, 4), text)},
               month{static_cast<unsigned>(parse_int(text.substr(5, 2), text))},
               day{static_cast<unsigned>(parse_int(text.substr(8, 2), text))}};
  if (!d.ok()) throw Error("invalid date '" + std::string(text) + "'");
  return d;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Timestamp Timestamp::from_date(Date date, unsigned hour) {
  if (!date.ok()) throw Error("invalid calendar date");
  if (hour > 23) throw Error("hour out of range");
  const auto days = sys_days(date).time_since_epoch().count();
  return Timestamp(static_cast<std::int64_t>(days) * 24 + hour);
}

Timestamp Timestamp::from_civil(int y, unsigned m, unsigned d, unsigned h) {
  return from_date(Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}, h);
}

Timestamp Timestamp::parse(std::string_view text) {
  if (text.size() == 10) return from_date(parse_date(text), 0);
  if (text.size() != 16 || text[10] != ' ' || text[13] != ':')
    throw Error("malformed timestamp '" + std::string(text) + "', expected YYYY-MM-DD HH:00");
  const int h = parse_int(text.substr(11, 2), text);
  const int mins = parse_int(text.substr(14, 2), text);
  if (mins != 0) throw Error("timestamp '" + std::string(text) + "' is not on the hour");
  if (h < 0 || h > 23) throw Error("hour out of range in '" + std::string(text) + "'");
  return from_date(parse_date(text.substr(0, 10)), static_cast<unsigned>(h));
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return a / b - ((a % b != 0) && ((a < 0) != (b < 0)));
}

}  // namespace

Date Timestamp::date() const {
  return Date{sys_days{days{floor_div(hours_, 24)}}};
}

int Timestamp::hour() const { return static_cast<int>(hours_ - floor_div(hours_, 24) * 24); }

int Timestamp::day_of_week() const {
  return static_cast<int>(weekday{sys_days{days{floor_div(hours_, 24)}}}.iso_encoding());
}

unsigned Timestamp::month() const { return static_cast<unsigned>(date().month()); }

std::string Timestamp::to_string() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, " %02d:00", hour());
  return format_date(date()) + buf;
}

}  // namespace stlf
