#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace stlf {

using Date = std::chrono::year_month_day;

// Hour-resolution naive local time, stored as whole hours since
// 1970-01-01 00:00.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::int64_t hours) : hours_(hours) {}

  static Timestamp from_civil(int year, unsigned month, unsigned day, unsigned hour = 0);
  static Timestamp from_date(Date date, unsigned hour = 0);
  // "YYYY-MM-DD HH:00"; also accepts a bare "YYYY-MM-DD" as midnight.
  static Timestamp parse(std::string_view text);

  constexpr std::int64_t hours() const { return hours_; }
  Date date() const;
  int hour() const;
  // ISO weekday: Monday = 1 ... Sunday = 7.
  int day_of_week() const;
  unsigned month() const;

  std::string to_string() const;

  constexpr Timestamp operator+(std::int64_t h) const { return Timestamp(hours_ + h); }
  constexpr Timestamp operator-(std::int64_t h) const { return Timestamp(hours_ - h); }
  constexpr std::int64_t operator-(Timestamp o) const { return hours_ - o.hours_; }
  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  std::int64_t hours_ = 0;
};

Date parse_date(std::string_view text);
std::string format_date(Date d);

}  // namespace stlf
